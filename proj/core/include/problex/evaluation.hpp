#pragma once

#include <span>
#include <string>
#include <vector>

#include "problex/model.hpp"
#include "problex/types.hpp"

namespace problex {

/// Mann-Whitney AUC with half credit for ties, O(n log n) by midranks.
/// Requires both classes present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct LengthBin {
  std::int64_t min_tokens = 0;
  std::int64_t max_tokens = 0;
  std::int64_t docs = 0;
  std::vector<double> accuracy;  // parallel to EvalReport::rules
};

struct EvalReport {
  std::vector<std::string> rules;
  std::vector<double> auc;        // parallel to rules
  std::vector<std::int64_t> ties; // docs with score exactly 0, per rule
  std::int64_t documents = 0;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
  std::vector<LengthBin> length_bins;  // 7 equal-size bins by document length
};

/// Scores every labeled document under each requested rule
/// (count|presence|mult|dcm|pmi) and reports AUC, ties and accuracy by
/// length bin. The pmi rule fits its table on the evaluated corpus.
EvalReport evaluate(const Corpus& corpus, const PredictivenessModel& model,
                    const std::vector<std::string>& rules);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

}  // namespace problex
