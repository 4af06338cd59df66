#include <benchmark/benchmark.h>

#include "problex/analysis.hpp"
#include "problex/corpus.hpp"
#include "problex/evaluation.hpp"
#include "problex/model.hpp"
#include "problex/moments.hpp"
#include "problex/random.hpp"
#include "problex/solver.hpp"

namespace {

using namespace problex;

SyntheticCorpus make_corpus(std::int64_t docs, std::int32_t vocab,
                            std::int32_t lex) {
  SyntheticSpec spec;
  spec.vocab_size = vocab;
  spec.lex_size0 = spec.lex_size1 = lex;
  spec.mu.assign(vocab, 1.0 / vocab);
  spec.gamma0.assign(lex, 0.5);
  spec.gamma1.assign(lex, 0.5);
  spec.length = FixedLength{100};
  spec.docs = docs;
  spec.seed = 7;
  return gen_multinomial_corpus(spec);
}

void BM_generate(benchmark::State& state) {
  for (auto _ : state) {
    auto synth = make_corpus(state.range(0), 1000, 50);
    benchmark::DoNotOptimize(synth.corpus.docs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_generate)->Arg(1000)->Arg(5000);

void BM_cross_label_counts(benchmark::State& state) {
  auto synth = make_corpus(state.range(0), 1000, 50);
  for (auto _ : state) {
    auto counts = cross_label_counts(synth.corpus, synth.pair);
    benchmark::DoNotOptimize(counts.first.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_cross_label_counts)->Arg(1000)->Arg(10000);

void BM_fit(benchmark::State& state) {
  auto synth = make_corpus(5000, 1000, state.range(0));
  auto stats = corpus_stats(synth.corpus);
  auto mu = estimate_baseline(synth.corpus);
  auto moments = compute_moments(synth.corpus, synth.pair, mu, stats);
  for (auto _ : state) {
    auto result = fit(moments, SolverConfig{});
    benchmark::DoNotOptimize(result.objective);
  }
}
BENCHMARK(BM_fit)->Arg(10)->Arg(50)->Arg(200);

void BM_score_mult(benchmark::State& state) {
  auto synth = make_corpus(2000, 1000, 50);
  PredictivenessModel model;
  for (std::size_t i = 0; i < synth.pair.lex0.size(); ++i) {
    model.words0.push_back(synth.corpus.vocab.word(synth.pair.lex0[i]));
    model.mu0.push_back(synth.mu[synth.pair.lex0[i]]);
  }
  for (std::size_t j = 0; j < synth.pair.lex1.size(); ++j) {
    model.words1.push_back(synth.corpus.vocab.word(synth.pair.lex1[j]));
    model.mu1.push_back(synth.mu[synth.pair.lex1[j]]);
  }
  model.g0 = synth.gamma0;
  model.g1 = synth.gamma1;
  model.tau = 500.0;
  Scorer scorer(model, synth.corpus.vocab);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scorer.score_mult(synth.corpus.docs[t++ % synth.corpus.size()]));
  }
}
BENCHMARK(BM_score_mult);

void BM_score_dcm(benchmark::State& state) {
  auto synth = make_corpus(2000, 1000, 50);
  PredictivenessModel model;
  for (std::size_t i = 0; i < synth.pair.lex0.size(); ++i) {
    model.words0.push_back(synth.corpus.vocab.word(synth.pair.lex0[i]));
    model.mu0.push_back(synth.mu[synth.pair.lex0[i]]);
  }
  for (std::size_t j = 0; j < synth.pair.lex1.size(); ++j) {
    model.words1.push_back(synth.corpus.vocab.word(synth.pair.lex1[j]));
    model.mu1.push_back(synth.mu[synth.pair.lex1[j]]);
  }
  model.g0 = synth.gamma0;
  model.g1 = synth.gamma1;
  model.tau = 500.0;
  Scorer scorer(model, synth.corpus.vocab);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scorer.score_dcm(synth.corpus.docs[t++ % synth.corpus.size()]));
  }
}
BENCHMARK(BM_score_dcm);

void BM_auc(benchmark::State& state) {
  Rng rng(11);
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    scores.push_back(rng.uniform(-1, 1));
    labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
  }
  labels[0] = 0;
  labels[1] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(auc(scores, labels));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_auc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
