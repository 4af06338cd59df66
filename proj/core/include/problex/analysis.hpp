#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "problex/lexicon.hpp"
#include "problex/types.hpp"

namespace problex {

struct MarginMoments {
  double mean = 0;            // 2 N gamma s_mu
  double variance_bound = 0;  // 2 N s_mu
  double z_lower = 0;         // gamma sqrt(2 N s_mu)
};

/// Requires gamma in [0,1), N >= 0 and coverage s_mu in (0, 0.5].
MarginMoments margin_moments(double gamma, std::int64_t n_tokens,
                             double coverage);

/// Standard normal CDF via erfc; absolute accuracy well under 1e-10.
double normal_cdf(double z);

/// Phi(gamma * sqrt(2 N s_mu)), the expected-accuracy lower bound of the
/// uniform count-rule model.
double expected_accuracy_lower_bound(double gamma, std::int64_t n_tokens,
                                     double coverage);

/// Contribution of a repeated word to the DCM rule, normalized so a single
/// occurrence contributes exactly 1. gamma = 0 makes the normalizer zero and
/// is an error.
double effective_count(std::int64_t x, double tau, double mu, double gamma);

// --- synthetic corpora ---------------------------------------------------

struct FixedLength {
  std::int64_t tokens = 0;
};
struct PoissonLength {
  double mean = 0;
};
using LengthSpec = std::variant<FixedLength, PoissonLength>;

/// Generator input. Words are named w<id>; lexicon 0 is ids
/// [0, lex_size0), lexicon 1 is [lex_size0, lex_size0 + lex_size1).
struct SyntheticSpec {
  std::int32_t vocab_size = 0;
  std::int32_t lex_size0 = 0;
  std::int32_t lex_size1 = 0;
  std::vector<double> mu;         // size vocab_size, sums to 1
  std::vector<double> gamma0;     // size lex_size0, in [0,1)
  std::vector<double> gamma1;     // size lex_size1
  LengthSpec length = FixedLength{100};
  std::int64_t docs = 0;
  double prior1 = 0.5;            // P(Y = 1)
  std::optional<double> tau;      // set for DCM generation
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  Corpus corpus;
  LexiconPair pair;
  std::vector<double> gamma0;  // after coverage projection
  std::vector<double> gamma1;
  std::vector<double> mu;      // the generating baseline
};

/// Labeled multinomial corpus: y ~ Bernoulli(prior1), theta_y scales mu by
/// (1 +/- gamma_i) on lexicon words, counts drawn multinomially. The
/// requested gammas are projected (one side scaled down) so that
/// mu0.g0 == mu1.g1 and both theta vectors sum to one.
SyntheticCorpus gen_multinomial_corpus(const SyntheticSpec& spec);

/// DCM corpus: per document nu ~ Dirichlet(tau * theta_y), counts ~
/// Multinomial(nu, N). Requires spec.tau > 0.
SyntheticCorpus gen_dcm_corpus(const SyntheticSpec& spec);

/// Builds a SyntheticSpec from its JSON description (the `synth` CLI format).
SyntheticSpec synthetic_spec_from_json(const std::string& text);

}  // namespace problex
