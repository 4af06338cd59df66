#include "problex/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "problex/moments.hpp"

namespace problex {

namespace {

std::string strip(const std::string& line) {
  std::string s = line;
  if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

LexiconLoad load_lexicon(const std::string& path, const Vocabulary& vocab,
                         const TokenizerRules& rules) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open lexicon file: " + path);

  LexiconLoad result;
  std::set<WordId> ids;
  std::set<std::string> seen_oov;
  std::string line;
  while (std::getline(in, line)) {
    std::string word = strip(line);
    if (word.empty()) continue;
    if (rules.lowercase)
      for (char& c : word)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (auto id = vocab.find(word)) {
      ids.insert(*id);
    } else if (seen_oov.insert(word).second) {
      result.out_of_vocab.push_back(word);
    }
  }
  result.ids.assign(ids.begin(), ids.end());
  if (result.ids.empty())
    fail_validation("lexicon " + path +
                    " is empty after vocabulary intersection");
  return result;
}

LexiconPair validate_pair(std::vector<WordId> lex0, std::vector<WordId> lex1,
                          PairReport* report, const std::string& name0,
                          const std::string& name1) {
  std::sort(lex0.begin(), lex0.end());
  lex0.erase(std::unique(lex0.begin(), lex0.end()), lex0.end());
  std::sort(lex1.begin(), lex1.end());
  lex1.erase(std::unique(lex1.begin(), lex1.end()), lex1.end());

  std::vector<WordId> overlap;
  std::set_intersection(lex0.begin(), lex0.end(), lex1.begin(), lex1.end(),
                        std::back_inserter(overlap));
  if (!overlap.empty()) {
    auto remove_overlap = [&overlap](std::vector<WordId>& lex) {
      std::vector<WordId> kept;
      std::set_difference(lex.begin(), lex.end(), overlap.begin(),
                          overlap.end(), std::back_inserter(kept));
      lex = std::move(kept);
    };
    remove_overlap(lex0);
    remove_overlap(lex1);
  }
  if (report) report->removed_overlap = overlap;

  if (lex0.empty() || lex1.empty())
    fail_validation("empty lexicon " + (lex0.empty() ? name0 : name1) +
                    " after removing overlap");

  LexiconPair pair;
  pair.lex0 = std::move(lex0);
  pair.lex1 = std::move(lex1);
  pair.name0 = name0;
  pair.name1 = name1;
  return pair;
}

bool above_chance_cooccurrence(double cross_count, double pair_weight,
                               double mu_i, double opposite_coverage) {
  return cross_count > pair_weight * mu_i * opposite_coverage;
}

LexiconPair prune_lexicons(const Corpus& corpus, const LexiconPair& pair,
                           const CorpusStats& stats,
                           const std::vector<double>& mu,
                           PruneReport* report) {
  auto [c0, c1] = cross_label_counts(corpus, pair);
  const double s = to_double(stats.pair_weight);

  auto coverage = [&mu](const std::vector<WordId>& lex) {
    double sum = 0;
    for (WordId id : lex) sum += mu.at(id);
    return sum;
  };
  const double cov0 = coverage(pair.lex0);
  const double cov1 = coverage(pair.lex1);

  PruneReport local;
  PruneReport& rep = report ? *report : local;

  auto prune_side = [&](const std::vector<WordId>& lex,
                        const std::vector<Count>& c, double opposite_cov,
                        std::vector<WordId>& removed,
                        std::vector<WordId>& zero_mu) {
    std::vector<WordId> kept;
    for (std::size_t k = 0; k < lex.size(); ++k) {
      const double mu_i = mu.at(lex[k]);
      if (mu_i <= 0) {
        zero_mu.push_back(lex[k]);
      } else if (above_chance_cooccurrence(static_cast<double>(c[k]), s, mu_i,
                                           opposite_cov)) {
        removed.push_back(lex[k]);
      } else {
        kept.push_back(lex[k]);
      }
    }
    return kept;
  };

  LexiconPair pruned;
  pruned.name0 = pair.name0;
  pruned.name1 = pair.name1;
  pruned.lex0 = prune_side(pair.lex0, c0, cov1, rep.removed0, rep.zero_mu0);
  pruned.lex1 = prune_side(pair.lex1, c1, cov0, rep.removed1, rep.zero_mu1);

  if (pruned.lex0.empty() || pruned.lex1.empty()) {
    const auto& name = pruned.lex0.empty() ? pair.name0 : pair.name1;
    fail_validation("pruning emptied lexicon " + name + " (" +
                    std::to_string(rep.removed0.size() + rep.zero_mu0.size()) +
                    " removed from side 0, " +
                    std::to_string(rep.removed1.size() + rep.zero_mu1.size()) +
                    " from side 1)");
  }
  return pruned;
}

}  // namespace problex
