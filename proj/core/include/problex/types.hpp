#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace problex {

using WordId = std::int32_t;
using Count = std::int64_t;

// Wide accumulator for pair weights and cross counts. Corpora with more than
// ~3e9 tokens in a single document would overflow int64 in N*(N-1) sums.
using WideInt = __int128;

inline double to_double(WideInt v) { return static_cast<double>(v); }

enum class ErrorKind { validation, convergence, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}
[[noreturn]] inline void fail_convergence(const std::string& what) {
  throw Error(ErrorKind::convergence, what);
}
[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::io, what);
}

/// Dense word <-> id bijection. Ids are assigned in insertion order, 0..V-1.
class Vocabulary {
 public:
  WordId add(std::string_view word) {
    auto it = index_.find(std::string(word));
    if (it != index_.end()) return it->second;
    WordId id = static_cast<WordId>(words_.size());
    words_.emplace_back(word);
    index_.emplace(words_.back(), id);
    return id;
  }

  std::optional<WordId> find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

/// Sparse non-negative counts for one document. Entries are kept sorted by
/// word id with no explicit zeros; total() is the token count N.
class CountVector {
 public:
  using Entry = std::pair<WordId, Count>;

  CountVector() = default;
  explicit CountVector(std::vector<Entry> entries);

  Count count(WordId id) const;
  Count total() const { return total_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  Count total_ = 0;
};

constexpr std::int8_t kNoLabel = -1;

struct Corpus {
  Vocabulary vocab;
  std::vector<CountVector> docs;
  std::vector<std::string> ids;      // same length as docs
  std::vector<std::int8_t> labels;   // empty, or same length; -1 = unlabeled

  std::size_t size() const { return docs.size(); }
  bool has_labels() const;
  void check() const;  // throws on broken length invariants
};

struct CorpusStats {
  std::int64_t doc_count = 0;
  std::int64_t total_tokens = 0;
  std::vector<Count> word_totals;  // indexed by word id
  WideInt pair_weight = 0;         // s = sum_t N_t (N_t - 1)

  /// Fold one document in; associative with merge().
  void accumulate(const CountVector& doc);
  void merge(const CorpusStats& other);
};

}  // namespace problex
