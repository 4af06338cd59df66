#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "problex/tokenizer.hpp"
#include "problex/types.hpp"

namespace problex {

enum class VocabMode { grow, frozen };

struct CountedDoc {
  CountVector counts;
  std::int64_t oov_dropped = 0;  // frozen mode only
};

/// Builds a sparse count vector from tokens. In frozen mode, out-of-vocabulary
/// tokens are dropped and the drop count reported.
CountedDoc count_vector(std::span<const std::string> tokens, Vocabulary& vocab,
                        VocabMode mode = VocabMode::grow);

CorpusStats corpus_stats(const Corpus& corpus);

/// Relative-frequency baseline probabilities mu_i, summing to one.
/// Throws if the corpus has no tokens.
std::vector<double> estimate_baseline(const Corpus& corpus);

// --- ingestion ---------------------------------------------------------

/// Mapping for 1-5 star ratings: >=4 positive, <=2 negative, 3 dropped.
enum class RatingPolicy { none, stars_1to5 };

struct IngestOptions {
  TokenizerRules tokenizer;
  RatingPolicy ratings = RatingPolicy::none;
};

/// Plain text, one document per line. Document ids are the 0-based line
/// numbers rendered as strings.
Corpus read_corpus_text(const std::string& path, const IngestOptions& opt = {});

/// JSON lines with fields: id (string), text (string), optional label (0/1),
/// optional rating (1-5, used when opt.ratings says so). Documents whose
/// rating maps to "dropped" are skipped.
Corpus read_corpus_jsonl(const std::string& path, const IngestOptions& opt = {});

/// One word per line; line number = word id.
void write_vocabulary(const std::string& path, const Vocabulary& vocab);

}  // namespace problex
