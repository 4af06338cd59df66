#include <cmath>

#include "problex/model.hpp"

namespace problex {

PmiTable pmi_fit(const Corpus& corpus, const LexiconPair& pair) {
  if (corpus.docs.empty()) fail_validation("cannot fit PMI on empty corpus");

  const std::size_t vocab_size = corpus.vocab.size();
  std::vector<double> count_pos(vocab_size, 0.0), count_neg(vocab_size, 0.0);
  double tokens_pos = 0, tokens_neg = 0;
  bool any_nonzero_margin = false;

  for (const CountVector& doc : corpus.docs) {
    const double margin = margin_count(doc, pair);
    if (margin != 0) any_nonzero_margin = true;
    const int imputed = decide(margin);
    auto& counts = imputed == 1 ? count_pos : count_neg;
    (imputed == 1 ? tokens_pos : tokens_neg) +=
        static_cast<double>(doc.total());
    for (const auto& [id, n] : doc.entries())
      counts[id] += static_cast<double>(n);
  }
  if (!any_nonzero_margin)
    fail_validation("no imputed labels: every document ties under the seed "
                    "counting rule");

  PmiTable table;
  table.sigma.resize(vocab_size);
  for (std::size_t w = 0; w < vocab_size; ++w) {
    table.sigma[w] = std::log((count_pos[w] + 0.5) * (tokens_neg + 0.5)) -
                     std::log((count_neg[w] + 0.5) * (tokens_pos + 0.5));
  }
  return table;
}

double pmi_score(const CountVector& x, const PmiTable& table) {
  double score = 0;
  for (const auto& [id, n] : x.entries()) {
    if (static_cast<std::size_t>(id) >= table.sigma.size()) continue;
    score += static_cast<double>(n) * table.sigma[id];
  }
  return score;
}

}  // namespace problex
