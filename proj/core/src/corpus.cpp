#include "problex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace problex {

CountVector::CountVector(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].second < 0)
      fail_validation("negative count for word id " +
                      std::to_string(entries_[i].first));
    if (entries_[i].second == 0) continue;
    if (out > 0 && entries_[out - 1].first == entries_[i].first) {
      entries_[out - 1].second += entries_[i].second;
    } else {
      entries_[out++] = entries_[i];
    }
  }
  entries_.resize(out);
  total_ = 0;
  for (const auto& [id, n] : entries_) total_ += n;
}

Count CountVector::count(WordId id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, WordId key) { return e.first < key; });
  if (it == entries_.end() || it->first != id) return 0;
  return it->second;
}

bool Corpus::has_labels() const {
  if (labels.empty()) return false;
  return std::any_of(labels.begin(), labels.end(),
                     [](std::int8_t y) { return y >= 0; });
}

void Corpus::check() const {
  if (!ids.empty() && ids.size() != docs.size())
    fail_validation("corpus id list length does not match document count");
  if (!labels.empty() && labels.size() != docs.size())
    fail_validation("corpus label list length does not match document count");
}

void CorpusStats::accumulate(const CountVector& doc) {
  doc_count += 1;
  const Count n = doc.total();
  total_tokens += n;
  pair_weight += static_cast<WideInt>(n) * static_cast<WideInt>(n - 1);
  for (const auto& [id, c] : doc.entries()) {
    if (static_cast<std::size_t>(id) >= word_totals.size())
      word_totals.resize(id + 1, 0);
    word_totals[id] += c;
  }
}

void CorpusStats::merge(const CorpusStats& other) {
  doc_count += other.doc_count;
  total_tokens += other.total_tokens;
  pair_weight += other.pair_weight;
  if (word_totals.size() < other.word_totals.size())
    word_totals.resize(other.word_totals.size(), 0);
  for (std::size_t i = 0; i < other.word_totals.size(); ++i)
    word_totals[i] += other.word_totals[i];
}

CountedDoc count_vector(std::span<const std::string> tokens, Vocabulary& vocab,
                        VocabMode mode) {
  CountedDoc result;
  std::map<WordId, Count> counts;
  for (const std::string& tok : tokens) {
    if (mode == VocabMode::grow) {
      counts[vocab.add(tok)] += 1;
    } else if (auto id = vocab.find(tok)) {
      counts[*id] += 1;
    } else {
      result.oov_dropped += 1;
    }
  }
  std::vector<CountVector::Entry> entries(counts.begin(), counts.end());
  result.counts = CountVector(std::move(entries));
  return result;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.word_totals.resize(corpus.vocab.size(), 0);
  for (const CountVector& doc : corpus.docs) stats.accumulate(doc);
  return stats;
}

std::vector<double> estimate_baseline(const Corpus& corpus) {
  CorpusStats stats = corpus_stats(corpus);
  if (stats.total_tokens <= 0) fail_validation("no tokens");
  std::vector<double> mu(corpus.vocab.size(), 0.0);
  const double total = static_cast<double>(stats.total_tokens);
  for (std::size_t i = 0; i < mu.size(); ++i)
    mu[i] = static_cast<double>(stats.word_totals[i]) / total;
  return mu;
}

}  // namespace problex
