#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "problex/lexicon.hpp"
#include "problex/types.hpp"

namespace problex {

// Scores are oriented toward label 1: positive score predicts 1.

/// Count rule: sum of lex1 counts minus sum of lex0 counts.
double margin_count(const CountVector& x, const LexiconPair& pair);

/// Presence rule: counts each lexicon word type at most once.
double margin_presence(const CountVector& x, const LexiconPair& pair);

/// 1 if score > 0, else 0. Ties go to label 0. NaN is an error.
int decide(double score);

struct ModelMeta {
  std::string corpus_fingerprint;
  int solver_iterations = 0;
  double solver_objective = 0;
  double solver_constraint_residual = 0;
  bool solver_converged = true;
};

/// Fitted parameters. Per-word gammas live in g0/g1; when global_gamma is
/// set the model is the uniform one and g0/g1 are ignored by scoring.
struct PredictivenessModel {
  std::vector<std::string> words0, words1;
  std::vector<double> mu0, mu1;  // baseline probabilities, > 0
  std::vector<double> g0, g1;    // in [0, 1)
  std::optional<double> global_gamma;
  std::optional<double> tau;     // DCM concentration, > 0
  double prior_logodds = 0;
  std::string name0 = "lex0";
  std::string name1 = "lex1";
  ModelMeta meta;

  void check() const;  // size/range invariants
};

/// log((1+g)/(1-g)), the per-word log likelihood ratio.
double predictiveness_weight(double gamma);

/// A model bound to a vocabulary for scoring. Words absent from the
/// vocabulary can never occur in its documents and are skipped.
class Scorer {
 public:
  Scorer(const PredictivenessModel& model, const Vocabulary& vocab);

  double margin_count(const CountVector& x) const;
  double margin_presence(const CountVector& x) const;

  /// Weighted count rule: sum over lexicon words of +/- x_i * w(gamma_i)
  /// plus the prior log odds. For a global-gamma model this is exactly
  /// w(gamma) * margin_count(x) + prior.
  double score_mult(const CountVector& x) const;

  /// DCM rule via log-gamma; a word with x_i = 0 contributes exactly 0.
  /// Requires tau > 0.
  double score_dcm(const CountVector& x) const;

  double score(const std::string& rule, const CountVector& x) const;

 private:
  struct Slot {
    std::int8_t side;    // 0 or 1
    double sign;         // +1 for lex1, -1 for lex0
    double weight;       // w(gamma_i)
    double alpha_in;     // tau (1 + gamma_i) mu_i
    double alpha_out;    // tau (1 - gamma_i) mu_i
  };
  std::unordered_map<WordId, Slot> slots_;
  double prior_ = 0;
  std::optional<double> global_gamma_;
  std::optional<double> tau_;
  double global_weight_ = 0;
};

struct TauSearch {
  double lo = 1.0;
  double hi = 1e9;
  int iterations = 200;  // golden-section steps over log tau
};

struct TauEstimate {
  double tau = 0;
  double loglik = 0;
  bool low_confidence = false;  // fewer than two documents inform tau
};

/// Concentration estimate from out-of-lexicon words only: maximizes the DCM
/// likelihood of the out-of-lexicon count subvectors (with mu restricted and
/// renormalized over those words) by golden-section search on log tau.
/// Errors when no document has two or more out-of-lexicon tokens.
TauEstimate estimate_concentration(const Corpus& corpus,
                                   const LexiconPair& pair,
                                   const std::vector<double>& mu,
                                   const TauSearch& search = {});

// --- PMI baseline -------------------------------------------------------

struct PmiTable {
  std::vector<double> sigma;  // per word id, add-0.5 smoothed log odds
};

/// Imputes labels with the count rule, then scores every vocabulary word by
/// smoothed PMI between the word and the imputed labels. Errors when every
/// document ties under the seed rule.
PmiTable pmi_fit(const Corpus& corpus, const LexiconPair& pair);

double pmi_score(const CountVector& x, const PmiTable& table);

// --- serialization ------------------------------------------------------

std::string model_to_json(const PredictivenessModel& model);
PredictivenessModel model_from_json(const std::string& text);
void write_model(const std::string& path, const PredictivenessModel& model);
PredictivenessModel read_model(const std::string& path);

/// FNV-1a over document counts, ids and labels; stable across runs.
std::string corpus_fingerprint(const Corpus& corpus);

}  // namespace problex
