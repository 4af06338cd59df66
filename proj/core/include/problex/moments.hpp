#pragma once

#include <string>
#include <utility>
#include <vector>

#include "problex/lexicon.hpp"
#include "problex/types.hpp"

namespace problex {

/// Cross-lexicon co-occurrence statistics, indexed parallel to
/// pair.lex0 / pair.lex1.
struct MomentStats {
  std::vector<Count> c0, c1;    // observed cross-label counts
  std::vector<double> mu0, mu1; // baseline probabilities of lexicon words
  std::vector<double> r0, r1;   // residuals c_i - s*mu_i*coverage(opposite)
  double coverage0 = 0;         // sum of mu over lex0
  double coverage1 = 0;
  WideInt s = 0;                // pair weight, sum_t N_t (N_t - 1)

  std::size_t size0() const { return mu0.size(); }
  std::size_t size1() const { return mu1.size(); }
};

/// c_i = sum_t x_i^(t) * (sum over the opposite lexicon of x_j^(t)),
/// exact integer arithmetic. First vector is for lex0 words, second for lex1.
std::pair<std::vector<Count>, std::vector<Count>> cross_label_counts(
    const Corpus& corpus, const LexiconPair& pair);

/// Streaming form: fold documents into running totals (associative).
void accumulate_cross_label_counts(const CountVector& doc,
                                   const LexiconPair& pair,
                                   std::vector<WideInt>& acc0,
                                   std::vector<WideInt>& acc1);

MomentStats compute_moments(const Corpus& corpus, const LexiconPair& pair,
                            const std::vector<double>& mu,
                            const CorpusStats& stats);

/// E[x_i x_j] = N (N-1) theta_i theta_j for one multinomial document.
double expected_pair_product(std::int64_t n_tokens, double theta_i,
                             double theta_j);

/// E[c_i] = s * mu_i * sum over the opposite lexicon of mu_j (1 - g_i g_j).
/// side selects whether index i refers to lex0 or lex1.
double expected_cross_count(int side, std::size_t index,
                            const std::vector<double>& g0,
                            const std::vector<double>& g1,
                            const MomentStats& stats);

/// Moment-matching objective
/// J = 1/2 sum_lex0 (c_i - E[c_i])^2 + 1/2 sum_lex1 (c_j - E[c_j])^2.
double objective(const std::vector<double>& g0, const std::vector<double>& g1,
                 const MomentStats& stats);

/// JSON object with arrays c0,c1,r0,r1,mu0,mu1 and scalar s.
std::string moments_to_json(const MomentStats& stats, const LexiconPair& pair,
                            const Vocabulary& vocab);

}  // namespace problex
