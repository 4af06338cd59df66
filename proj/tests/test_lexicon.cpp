#include <filesystem>

#include "doctest.h"
#include "problex/analysis.hpp"
#include "problex/corpus.hpp"
#include "problex/fsio.hpp"
#include "problex/lexicon.hpp"
#include "problex/moments.hpp"
#include "test_support.hpp"

using namespace problex;

namespace {

std::string write_lexicon(const std::string& name, const std::string& body) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "problex_lexicon_test";
  fs::create_directories(dir);
  const std::string path = (dir / name).string();
  write_file_atomic(path, body);
  return path;
}

}  // namespace

TEST_CASE("load_lexicon intersects with the vocabulary") {
  Vocabulary vocab;
  vocab.add("good");
  vocab.add("great");

  SUBCASE("all words present") {
    auto load = load_lexicon(write_lexicon("l1.txt", "good\ngreat\n"), vocab);
    CHECK(load.ids.size() == 2);
    CHECK(load.out_of_vocab.empty());
  }
  SUBCASE("unknown words are reported, not lost silently") {
    auto load = load_lexicon(write_lexicon("l2.txt", "good\nzzzz\n"), vocab);
    CHECK(load.ids.size() == 1);
    CHECK(load.out_of_vocab == std::vector<std::string>{"zzzz"});
  }
  SUBCASE("duplicates are deduplicated") {
    auto load =
        load_lexicon(write_lexicon("l3.txt", "good\ngood\ngreat\n"), vocab);
    CHECK(load.ids.size() == 2);
  }
  SUBCASE("comments and blanks are ignored") {
    auto load = load_lexicon(
        write_lexicon("l4.txt", "# header\n\ngood  # inline\n"), vocab);
    CHECK(load.ids == std::vector<WordId>{0});
  }
  SUBCASE("unreadable file") {
    CHECK_THROWS_AS(load_lexicon("/nonexistent/lex.txt", vocab), Error);
  }
  SUBCASE("empty after intersection") {
    CHECK_THROWS_AS(load_lexicon(write_lexicon("l5.txt", "zzzz\n"), vocab),
                    Error);
  }
}

TEST_CASE("validate_pair enforces disjointness") {
  SUBCASE("already disjoint") {
    auto pair = validate_pair({0, 1}, {2});
    CHECK(pair.lex0 == std::vector<WordId>{0, 1});
    CHECK(pair.lex1 == std::vector<WordId>{2});
  }
  SUBCASE("overlap removed from both sides and reported") {
    PairReport report;
    auto pair = validate_pair({0, 1}, {1, 2}, &report);
    CHECK(pair.lex0 == std::vector<WordId>{0});
    CHECK(pair.lex1 == std::vector<WordId>{2});
    CHECK(report.removed_overlap == std::vector<WordId>{1});
  }
  SUBCASE("identical sides become empty") {
    CHECK_THROWS_AS(validate_pair({0}, {0}), Error);
  }
}

TEST_CASE("above_chance_cooccurrence applies the strict gamma-0 threshold") {
  // s=90, mu_i=0.1, opposite coverage 0.2: chance expectation is 1.8.
  CHECK(above_chance_cooccurrence(5, 90, 0.1, 0.2));
  CHECK_FALSE(above_chance_cooccurrence(1, 90, 0.1, 0.2));
  // Exactly at chance is kept (strict inequality).
  CHECK_FALSE(above_chance_cooccurrence(1.8, 90, 0.1, 0.2));
  // A zero count sits below any positive expectation.
  CHECK_FALSE(above_chance_cooccurrence(0, 90, 0.1, 0.2));
}

namespace {

// Clean docs plus one where "noisy" (side 0) co-occurs heavily with side 1.
// "up" itself stays just under its own chance threshold.
Corpus pruning_corpus() {
  return testsupport::make_corpus({
      {{"calm", 4}, {"filler", 6}},
      {{"up", 4}, {"filler", 6}},
      {{"noisy", 5}, {"up", 5}},
      {{"up", 4}, {"filler", 6}},
  });
}

}  // namespace

TEST_CASE("prune_lexicons removes words co-occurring above chance") {
  Corpus corpus = pruning_corpus();
  auto stats = corpus_stats(corpus);
  auto mu = estimate_baseline(corpus);
  LexiconPair pair = validate_pair(
      {*corpus.vocab.find("calm"), *corpus.vocab.find("noisy")},
      {*corpus.vocab.find("up")});

  PruneReport report;
  LexiconPair pruned = prune_lexicons(corpus, pair, stats, mu, &report);
  CHECK(pruned.lex0 == std::vector<WordId>{*corpus.vocab.find("calm")});
  CHECK(pruned.lex1 == pair.lex1);
  CHECK(report.removed0 == std::vector<WordId>{*corpus.vocab.find("noisy")});

  SUBCASE("surviving words have non-positive residuals vs the original pair") {
    auto [c0, c1] = cross_label_counts(corpus, pruned);
    const double s = to_double(stats.pair_weight);
    double cov1 = 0;
    for (WordId id : pair.lex1) cov1 += mu[id];
    for (std::size_t k = 0; k < pruned.lex0.size(); ++k) {
      const double r =
          static_cast<double>(c0[k]) - s * mu[pruned.lex0[k]] * cov1;
      CHECK(r <= 0);
    }
  }
  SUBCASE("pruning is idempotent here") {
    LexiconPair again = prune_lexicons(corpus, pruned, stats, mu);
    CHECK(again.lex0 == pruned.lex0);
    CHECK(again.lex1 == pruned.lex1);
  }
}

TEST_CASE("prune_lexicons drops zero-mu words with a report") {
  Corpus corpus = pruning_corpus();
  auto stats = corpus_stats(corpus);
  auto mu = estimate_baseline(corpus);
  const WordId ghost = corpus.vocab.add("ghost");  // never occurs
  mu.push_back(0.0);
  LexiconPair pair = validate_pair(
      {*corpus.vocab.find("calm"), ghost}, {*corpus.vocab.find("up")});
  PruneReport report;
  LexiconPair pruned = prune_lexicons(corpus, pair, stats, mu, &report);
  CHECK(report.zero_mu0 == std::vector<WordId>{ghost});
  CHECK(pruned.lex0 == std::vector<WordId>{*corpus.vocab.find("calm")});
}

TEST_CASE("prune_lexicons errors when a side empties") {
  // One document where the only side-0 word always rides with side 1.
  auto corpus = testsupport::make_corpus({{{"a", 3}, {"b", 3}, {"c", 4}}});
  auto stats = corpus_stats(corpus);
  auto mu = estimate_baseline(corpus);
  LexiconPair pair =
      validate_pair({*corpus.vocab.find("a")}, {*corpus.vocab.find("b")});
  CHECK_THROWS_AS(prune_lexicons(corpus, pair, stats, mu), Error);
}

TEST_CASE("prune_lexicons is idempotent on generated corpora") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SyntheticSpec spec;
    spec.vocab_size = 40;
    spec.lex_size0 = spec.lex_size1 = 5;
    spec.mu.assign(40, 1.0 / 40);
    spec.gamma0.assign(5, 0.4);
    spec.gamma1.assign(5, 0.4);
    spec.length = FixedLength{30};
    spec.docs = 400;
    spec.seed = seed;
    auto synth = gen_multinomial_corpus(spec);
    auto stats = corpus_stats(synth.corpus);
    auto mu = estimate_baseline(synth.corpus);
    LexiconPair once = prune_lexicons(synth.corpus, synth.pair, stats, mu);
    LexiconPair twice = prune_lexicons(synth.corpus, once, stats, mu);
    CHECK(once.lex0 == twice.lex0);
    CHECK(once.lex1 == twice.lex1);
  }
}
