#pragma once

#include <string>
#include <vector>

#include "problex/tokenizer.hpp"
#include "problex/types.hpp"

namespace problex {

/// Two disjoint in-vocabulary word sets; side 0 scores toward label 0.
struct LexiconPair {
  std::vector<WordId> lex0;  // sorted, unique
  std::vector<WordId> lex1;
  std::string name0 = "lex0";
  std::string name1 = "lex1";
};

struct LexiconLoad {
  std::vector<WordId> ids;               // sorted, deduplicated
  std::vector<std::string> out_of_vocab; // file order, deduplicated
};

/// UTF-8 text, one word per line, '#' comments and blank lines ignored.
/// Throws if the file is unreadable or no word survives the vocabulary
/// intersection.
LexiconLoad load_lexicon(const std::string& path, const Vocabulary& vocab,
                         const TokenizerRules& rules = {});

struct PairReport {
  std::vector<WordId> removed_overlap;  // words found on both sides
};

/// Removes words appearing on both sides from both, then checks neither side
/// is empty.
LexiconPair validate_pair(std::vector<WordId> lex0, std::vector<WordId> lex1,
                          PairReport* report = nullptr,
                          const std::string& name0 = "lex0",
                          const std::string& name1 = "lex1");

struct PruneReport {
  std::vector<WordId> removed0;  // cross-count above chance
  std::vector<WordId> removed1;
  std::vector<WordId> zero_mu0;  // baseline probability zero
  std::vector<WordId> zero_mu1;
};

/// True when the observed cross count exceeds its expectation under
/// gamma == 0, i.e. c_i > s * mu_i * sum of opposite-lexicon mu (strict).
bool above_chance_cooccurrence(double cross_count, double pair_weight,
                               double mu_i, double opposite_coverage);

/// One pass against the original opposite lexicons: drops zero-mu words,
/// then words whose cross-lexicon co-occurrence is above chance. Errors if a
/// side ends up empty.
LexiconPair prune_lexicons(const Corpus& corpus, const LexiconPair& pair,
                           const CorpusStats& stats,
                           const std::vector<double>& mu,
                           PruneReport* report = nullptr);

}  // namespace problex
