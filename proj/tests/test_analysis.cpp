#include <cmath>

#include "doctest.h"
#include "problex/analysis.hpp"
#include "problex/corpus.hpp"
#include "problex/evaluation.hpp"
#include "problex/model.hpp"
#include "problex/random.hpp"
#include "test_support.hpp"

using namespace problex;

TEST_CASE("margin_moments computes the closed forms") {
  SUBCASE("gamma 0 is chance") {
    MarginMoments m = margin_moments(0.0, 200, 0.1);
    CHECK(m.mean == 0.0);
    CHECK(m.z_lower == 0.0);
  }
  SUBCASE("gamma 0.5, N 100, coverage 0.04") {
    MarginMoments m = margin_moments(0.5, 100, 0.04);
    CHECK(m.mean == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.variance_bound == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(m.z_lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("doubling N doubles the mean and scales z by sqrt 2") {
    MarginMoments base = margin_moments(0.3, 100, 0.04);
    MarginMoments twice = margin_moments(0.3, 200, 0.04);
    CHECK(twice.mean == doctest::Approx(2 * base.mean));
    CHECK(twice.z_lower == doctest::Approx(std::sqrt(2.0) * base.z_lower));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(margin_moments(0.5, 100, 0.0), Error);
    CHECK_THROWS_AS(margin_moments(0.5, 100, 0.7), Error);
    CHECK_THROWS_AS(margin_moments(1.0, 100, 0.1), Error);
  }
}

TEST_CASE("normal_cdf matches Simpson quadrature to 1e-10") {
  for (double z : {-3.0, -1.0, 0.0, 0.5, 1.0, std::sqrt(2.0), 2.5, 4.0}) {
    CHECK(std::abs(normal_cdf(z) - testsupport::normal_cdf_quadrature(z)) <
          1e-10);
  }
  // The spec-level anchor value, from the quadrature oracle.
  CHECK(normal_cdf(std::sqrt(2.0)) ==
        doctest::Approx(0.921350396475).epsilon(1e-9));
}

TEST_CASE("expected_accuracy_lower_bound") {
  CHECK(expected_accuracy_lower_bound(0.0, 100, 0.04) == doctest::Approx(0.5));
  CHECK(expected_accuracy_lower_bound(0.5, 100, 0.04) ==
        doctest::Approx(0.921350396475).epsilon(1e-9));
  CHECK(expected_accuracy_lower_bound(0.999, 100000, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("monotone in gamma, N and coverage") {
    double prev = 0;
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double b = expected_accuracy_lower_bound(g, 100, 0.04);
      CHECK(b >= prev);
      prev = b;
    }
    prev = 0;
    for (std::int64_t n : {10, 100, 1000}) {
      const double b = expected_accuracy_lower_bound(0.4, n, 0.04);
      CHECK(b >= prev);
      prev = b;
    }
    prev = 0;
    for (double cov : {0.01, 0.05, 0.2, 0.5}) {
      const double b = expected_accuracy_lower_bound(0.4, 100, cov);
      CHECK(b >= prev);
      prev = b;
    }
  }
}

TEST_CASE("effective_count") {
  SUBCASE("x = 0 contributes nothing, x = 1 is the unit") {
    CHECK(effective_count(0, 10, 1e-3, 0.5) == 0.0);
    CHECK(effective_count(1, 10, 1e-3, 0.5) == 1.0);
  }
  SUBCASE("near-multinomial regime tracks counts; frozen oracle value") {
    // Long-double log-gamma oracle gives 9.495731599608 at tau = 1e5.
    const double ec = effective_count(10, 1e5, 1e-3, 0.5);
    CHECK(ec == doctest::Approx(9.495731599608).epsilon(1e-9));
    CHECK(ec > 9.0);
  }
  SUBCASE("small tau saturates repeated words") {
    const double ec = effective_count(10, 10.0, 1e-3, 0.5);
    CHECK(ec == doctest::Approx(1.025611390780).epsilon(1e-9));
    CHECK(ec <= 3.0);
  }
  SUBCASE("nondecreasing in x and tau, gamma 0 is an error") {
    double prev = -1;
    for (std::int64_t x = 0; x <= 15; ++x) {
      const double ec = effective_count(x, 100.0, 1e-3, 0.5);
      CHECK(ec >= prev);
      prev = ec;
    }
    prev = 0;
    for (double tau : {1.0, 10.0, 100.0, 1e4, 1e6}) {
      const double ec = effective_count(7, tau, 1e-3, 0.5);
      CHECK(ec >= prev);
      prev = ec;
    }
    CHECK_THROWS_AS(effective_count(3, 10.0, 1e-3, 0.0), Error);
  }
}

namespace {

SyntheticSpec base_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.vocab_size = 200;
  spec.lex_size0 = spec.lex_size1 = 10;
  spec.mu.assign(200, 1.0 / 200);
  spec.gamma0.assign(10, 0.5);
  spec.gamma1.assign(10, 0.5);
  spec.length = FixedLength{100};
  spec.docs = 2000;
  spec.seed = seed;
  return spec;
}

double rule_auc(const SyntheticCorpus& synth,
                double (*margin)(const CountVector&, const LexiconPair&)) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t t = 0; t < synth.corpus.docs.size(); ++t) {
    scores.push_back(margin(synth.corpus.docs[t], synth.pair));
    labels.push_back(synth.corpus.labels[t]);
  }
  return auc(scores, labels);
}

}  // namespace

TEST_CASE("generators are reproducible and respect the seed") {
  auto a = gen_multinomial_corpus(base_spec(7));
  auto b = gen_multinomial_corpus(base_spec(7));
  auto c = gen_multinomial_corpus(base_spec(8));
  REQUIRE(a.corpus.size() == b.corpus.size());
  bool identical = true, differs_from_c = false;
  for (std::size_t t = 0; t < a.corpus.size(); ++t) {
    if (!(a.corpus.docs[t].entries() == b.corpus.docs[t].entries()))
      identical = false;
    if (!(a.corpus.docs[t].entries() == c.corpus.docs[t].entries()))
      differs_from_c = true;
  }
  CHECK(identical);
  CHECK(differs_from_c);
  CHECK(a.corpus.labels == b.corpus.labels);
}

TEST_CASE("generator enforces the coverage constraint by projection") {
  SyntheticSpec spec = base_spec(3);
  // Unbalanced request: side 0 heavier.
  spec.gamma0.assign(10, 0.8);
  spec.gamma1.assign(10, 0.4);
  auto synth = gen_multinomial_corpus(spec);
  double a0 = 0, a1 = 0;
  for (int i = 0; i < 10; ++i) a0 += spec.mu[i] * synth.gamma0[i];
  for (int j = 0; j < 10; ++j) a1 += spec.mu[10 + j] * synth.gamma1[j];
  CHECK(a0 == doctest::Approx(a1).epsilon(1e-12));
  // The lighter side is untouched.
  CHECK(synth.gamma1[0] == doctest::Approx(0.4));
  CHECK(synth.gamma0[0] < 0.8);
}

TEST_CASE("generator rejects unbalanced one-sided requests") {
  SyntheticSpec spec = base_spec(3);
  spec.gamma0.assign(10, 0.0);
  spec.gamma1.assign(10, 0.4);
  CHECK_THROWS_AS(gen_multinomial_corpus(spec), Error);
}

TEST_CASE("per-word token frequencies match theta within 3 sigma") {
  SyntheticSpec spec;
  spec.vocab_size = 6;
  spec.lex_size0 = spec.lex_size1 = 1;
  spec.mu = {0.10, 0.10, 0.25, 0.25, 0.15, 0.15};
  spec.gamma0 = {0.6};
  spec.gamma1 = {0.6};
  spec.length = FixedLength{50};
  spec.docs = 20000;
  spec.seed = 1234;
  auto synth = gen_multinomial_corpus(spec);

  std::vector<double> theta0 = {0.16, 0.04, 0.25, 0.25, 0.15, 0.15};
  std::vector<double> theta1 = {0.04, 0.16, 0.25, 0.25, 0.15, 0.15};
  std::vector<double> tokens(6, 0.0);
  double total0 = 0, total1 = 0;
  std::vector<double> count0(6, 0.0), count1(6, 0.0);
  for (std::size_t t = 0; t < synth.corpus.size(); ++t) {
    const bool pos = synth.corpus.labels[t] == 1;
    for (const auto& [id, n] : synth.corpus.docs[t].entries()) {
      (pos ? count1 : count0)[id] += static_cast<double>(n);
      (pos ? total1 : total0) += static_cast<double>(n);
    }
  }
  for (int i = 0; i < 6; ++i) {
    const double p0 = count0[i] / total0;
    const double se0 = std::sqrt(theta0[i] * (1 - theta0[i]) / total0);
    CHECK(std::abs(p0 - theta0[i]) < 3 * se0);
    const double p1 = count1[i] / total1;
    const double se1 = std::sqrt(theta1[i] * (1 - theta1[i]) / total1);
    CHECK(std::abs(p1 - theta1[i]) < 3 * se1);
  }
}

TEST_CASE("uninformative lexicons give chance AUC") {
  SyntheticSpec spec = base_spec(55);
  spec.gamma0.assign(10, 0.0);
  spec.gamma1.assign(10, 0.0);
  spec.docs = 10000;
  auto synth = gen_multinomial_corpus(spec);
  CHECK(rule_auc(synth, margin_count) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("count-rule accuracy respects the analytic lower bound") {
  // Small-scale version of the bound check: gamma .5, N 100, coverage .02.
  SyntheticSpec spec;
  spec.vocab_size = 100;
  spec.lex_size0 = spec.lex_size1 = 5;
  spec.mu.assign(100, 0.0);
  for (int i = 0; i < 5; ++i) spec.mu[i] = 0.02 / 5;
  for (int j = 0; j < 5; ++j) spec.mu[5 + j] = 0.02 / 5;
  for (int k = 10; k < 100; ++k) spec.mu[k] = 0.96 / 90;
  spec.gamma0.assign(5, 0.5);
  spec.gamma1.assign(5, 0.5);
  spec.length = FixedLength{100};
  spec.docs = 4000;
  spec.seed = 77;
  auto synth = gen_multinomial_corpus(spec);

  std::int64_t correct = 0;
  for (std::size_t t = 0; t < synth.corpus.size(); ++t) {
    const int guess =
        decide(margin_count(synth.corpus.docs[t], synth.pair));
    if (guess == synth.corpus.labels[t]) ++correct;
  }
  const double accuracy =
      static_cast<double>(correct) / static_cast<double>(synth.corpus.size());
  const double bound = expected_accuracy_lower_bound(0.5, 100, 0.02);
  const double mc_se = std::sqrt(0.25 / 4000.0);
  CHECK(accuracy >= bound - 0.02 - 2 * mc_se);
}

TEST_CASE("DCM generator approaches the multinomial as tau grows") {
  SyntheticSpec spec;
  spec.vocab_size = 20;
  spec.lex_size0 = spec.lex_size1 = 2;
  spec.mu.assign(20, 1.0 / 20);
  spec.gamma0.assign(2, 0.3);
  spec.gamma1.assign(2, 0.3);
  spec.length = FixedLength{60};
  spec.docs = 12000;
  spec.seed = 500;
  spec.tau = 1e8;
  auto dcm = gen_dcm_corpus(spec);

  // Out-of-lexicon word count variance vs the multinomial one.
  const WordId w = 15;
  double sum = 0, sumsq = 0;
  for (const auto& doc : dcm.corpus.docs) {
    const double x = static_cast<double>(doc.count(w));
    sum += x;
    sumsq += x * x;
  }
  const double n_docs = static_cast<double>(dcm.corpus.size());
  const double mean = sum / n_docs;
  const double var = sumsq / n_docs - mean * mean;
  const double theta = 1.0 / 20;
  const double multinomial_var = 60.0 * theta * (1 - theta);
  CHECK(std::abs(var - multinomial_var) / multinomial_var < 0.05);
}

TEST_CASE("DCM corpus with gamma 0 carries no label signal") {
  SyntheticSpec spec = base_spec(81);
  spec.gamma0.assign(10, 0.0);
  spec.gamma1.assign(10, 0.0);
  spec.docs = 6000;
  spec.tau = 300.0;
  auto synth = gen_dcm_corpus(spec);
  CHECK(rule_auc(synth, margin_count) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("poisson lengths are accepted and reproducible") {
  SyntheticSpec spec = base_spec(9);
  spec.length = PoissonLength{40.0};
  spec.docs = 500;
  auto a = gen_multinomial_corpus(spec);
  auto b = gen_multinomial_corpus(spec);
  double mean = 0;
  for (const auto& doc : a.corpus.docs)
    mean += static_cast<double>(doc.total());
  mean /= 500;
  CHECK(mean == doctest::Approx(40.0).epsilon(0.05));
  for (std::size_t t = 0; t < 500; ++t)
    REQUIRE(a.corpus.docs[t].total() == b.corpus.docs[t].total());
}
