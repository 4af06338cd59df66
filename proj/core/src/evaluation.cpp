#include "problex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace problex {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    fail_validation("score and label lists differ in length");
  const std::size_t n = scores.size();
  std::int64_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) fail_validation("labels must be 0 or 1");
    positives += y;
  }
  const std::int64_t negatives = static_cast<std::int64_t>(n) - positives;
  if (positives == 0 || negatives == 0)
    fail_validation("AUC needs both classes present");

  // Midrank assignment, then the Mann-Whitney rank-sum statistic.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = midrank;
    i = j + 1;
  }
  double rank_sum_pos = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (labels[k] == 1) rank_sum_pos += rank[k];
  const double u = rank_sum_pos - 0.5 * static_cast<double>(positives) *
                                      (static_cast<double>(positives) + 1.0);
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

EvalReport evaluate(const Corpus& corpus, const PredictivenessModel& model,
                    const std::vector<std::string>& rules) {
  corpus.check();
  if (!corpus.has_labels()) fail_validation("evaluation needs gold labels");

  std::vector<std::size_t> labeled;
  for (std::size_t t = 0; t < corpus.docs.size(); ++t)
    if (corpus.labels[t] >= 0) labeled.push_back(t);

  Scorer scorer(model, corpus.vocab);
  std::optional<PmiTable> pmi;
  LexiconPair pair;
  for (const std::string& rule : rules) {
    if (rule == "pmi" && !pmi) {
      // PMI needs id-level lexicons for the seed rule on this corpus.
      for (const std::string& w : model.words0)
        if (auto id = corpus.vocab.find(w)) pair.lex0.push_back(*id);
      for (const std::string& w : model.words1)
        if (auto id = corpus.vocab.find(w)) pair.lex1.push_back(*id);
      std::sort(pair.lex0.begin(), pair.lex0.end());
      std::sort(pair.lex1.begin(), pair.lex1.end());
      pmi = pmi_fit(corpus, pair);
    }
  }

  EvalReport report;
  report.rules = rules;
  report.documents = static_cast<std::int64_t>(labeled.size());
  for (std::size_t t : labeled)
    (corpus.labels[t] == 1 ? report.positives : report.negatives) += 1;

  std::vector<int> labels;
  labels.reserve(labeled.size());
  for (std::size_t t : labeled) labels.push_back(corpus.labels[t]);

  std::vector<std::vector<double>> all_scores;
  for (const std::string& rule : rules) {
    std::vector<double> scores;
    scores.reserve(labeled.size());
    std::int64_t ties = 0;
    for (std::size_t t : labeled) {
      const double s = rule == "pmi" ? pmi_score(corpus.docs[t], *pmi)
                                     : scorer.score(rule, corpus.docs[t]);
      if (s == 0) ++ties;
      scores.push_back(s);
    }
    report.auc.push_back(auc(scores, labels));
    report.ties.push_back(ties);
    all_scores.push_back(std::move(scores));
  }

  // Seven equal-size bins by document length.
  const std::size_t n = labeled.size();
  std::vector<std::size_t> by_length(n);
  std::iota(by_length.begin(), by_length.end(), 0);
  std::stable_sort(by_length.begin(), by_length.end(),
                   [&](std::size_t a, std::size_t b) {
                     return corpus.docs[labeled[a]].total() <
                            corpus.docs[labeled[b]].total();
                   });
  const std::size_t bins = std::min<std::size_t>(7, n);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = n * b / bins, hi = n * (b + 1) / bins;
    if (lo >= hi) continue;
    LengthBin bin;
    bin.docs = static_cast<std::int64_t>(hi - lo);
    bin.min_tokens = corpus.docs[labeled[by_length[lo]]].total();
    bin.max_tokens = corpus.docs[labeled[by_length[hi - 1]]].total();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      std::int64_t correct = 0;
      for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t idx = by_length[k];
        if (decide(all_scores[r][idx]) == labels[idx]) ++correct;
      }
      bin.accuracy.push_back(static_cast<double>(correct) /
                             static_cast<double>(hi - lo));
    }
    report.length_bins.push_back(std::move(bin));
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  nlohmann::json auc_obj = nlohmann::json::object();
  nlohmann::json tie_obj = nlohmann::json::object();
  for (std::size_t r = 0; r < report.rules.size(); ++r) {
    auc_obj[report.rules[r]] = report.auc[r];
    tie_obj[report.rules[r]] = report.ties[r];
  }
  j["auc"] = auc_obj;
  j["ties"] = tie_obj;
  j["documents"] = report.documents;
  j["positives"] = report.positives;
  j["negatives"] = report.negatives;
  j["rules"] = report.rules;
  nlohmann::json bins = nlohmann::json::array();
  for (const LengthBin& bin : report.length_bins) {
    nlohmann::json b;
    b["min_tokens"] = bin.min_tokens;
    b["max_tokens"] = bin.max_tokens;
    b["docs"] = bin.docs;
    nlohmann::json acc = nlohmann::json::object();
    for (std::size_t r = 0; r < report.rules.size(); ++r)
      acc[report.rules[r]] = bin.accuracy[r];
    b["accuracy"] = acc;
    bins.push_back(b);
  }
  j["accuracy_by_length"] = bins;
  return j.dump(2);
}

EvalReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("bad report JSON: ") + e.what());
  }
  EvalReport report;
  report.rules = j.at("rules").get<std::vector<std::string>>();
  for (const std::string& rule : report.rules) {
    report.auc.push_back(j.at("auc").at(rule).get<double>());
    report.ties.push_back(j.at("ties").at(rule).get<std::int64_t>());
  }
  report.documents = j.at("documents").get<std::int64_t>();
  report.positives = j.at("positives").get<std::int64_t>();
  report.negatives = j.at("negatives").get<std::int64_t>();
  for (const auto& b : j.at("accuracy_by_length")) {
    LengthBin bin;
    bin.min_tokens = b.at("min_tokens").get<std::int64_t>();
    bin.max_tokens = b.at("max_tokens").get<std::int64_t>();
    bin.docs = b.at("docs").get<std::int64_t>();
    for (const std::string& rule : report.rules)
      bin.accuracy.push_back(b.at("accuracy").at(rule).get<double>());
    report.length_bins.push_back(std::move(bin));
  }
  return report;
}

}  // namespace problex
