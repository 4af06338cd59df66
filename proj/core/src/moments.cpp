#include "problex/moments.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"

namespace problex {

namespace {

// Word id -> (side, position) lookup for one lexicon pair.
struct SideIndex {
  std::vector<std::int8_t> side;   // -1 out-of-lexicon
  std::vector<std::int32_t> pos;

  SideIndex(const LexiconPair& pair, std::size_t vocab_size) {
    std::size_t need = vocab_size;
    auto max_id = [&need](const std::vector<WordId>& lex) {
      for (WordId id : lex)
        need = std::max(need, static_cast<std::size_t>(id) + 1);
    };
    max_id(pair.lex0);
    max_id(pair.lex1);
    side.assign(need, -1);
    pos.assign(need, 0);
    for (std::size_t k = 0; k < pair.lex0.size(); ++k) {
      side[pair.lex0[k]] = 0;
      pos[pair.lex0[k]] = static_cast<std::int32_t>(k);
    }
    for (std::size_t k = 0; k < pair.lex1.size(); ++k) {
      if (side[pair.lex1[k]] == 0)
        fail_validation("lexicons are not disjoint");
      side[pair.lex1[k]] = 1;
      pos[pair.lex1[k]] = static_cast<std::int32_t>(k);
    }
  }
};

void fold_document(const CountVector& doc, const SideIndex& index,
                   std::vector<WideInt>& acc0, std::vector<WideInt>& acc1) {
  WideInt tokens0 = 0, tokens1 = 0;
  for (const auto& [id, n] : doc.entries()) {
    if (static_cast<std::size_t>(id) >= index.side.size()) continue;
    if (index.side[id] == 0) tokens0 += n;
    if (index.side[id] == 1) tokens1 += n;
  }
  if (tokens0 == 0 && tokens1 == 0) return;
  for (const auto& [id, n] : doc.entries()) {
    if (static_cast<std::size_t>(id) >= index.side.size()) continue;
    const auto s = index.side[id];
    if (s == 0)
      acc0[index.pos[id]] += static_cast<WideInt>(n) * tokens1;
    else if (s == 1)
      acc1[index.pos[id]] += static_cast<WideInt>(n) * tokens0;
  }
}

Count narrow(WideInt v) {
  if (v > std::numeric_limits<Count>::max())
    fail_validation("cross-label count overflows 64 bits");
  return static_cast<Count>(v);
}

}  // namespace

std::pair<std::vector<Count>, std::vector<Count>> cross_label_counts(
    const Corpus& corpus, const LexiconPair& pair) {
  SideIndex index(pair, corpus.vocab.size());
  std::vector<WideInt> acc0(pair.lex0.size(), 0), acc1(pair.lex1.size(), 0);
  for (const CountVector& doc : corpus.docs)
    fold_document(doc, index, acc0, acc1);
  std::pair<std::vector<Count>, std::vector<Count>> result;
  result.first.reserve(acc0.size());
  result.second.reserve(acc1.size());
  for (WideInt v : acc0) result.first.push_back(narrow(v));
  for (WideInt v : acc1) result.second.push_back(narrow(v));
  return result;
}

void accumulate_cross_label_counts(const CountVector& doc,
                                   const LexiconPair& pair,
                                   std::vector<WideInt>& acc0,
                                   std::vector<WideInt>& acc1) {
  acc0.resize(pair.lex0.size(), 0);
  acc1.resize(pair.lex1.size(), 0);
  SideIndex index(pair, 0);
  fold_document(doc, index, acc0, acc1);
}

MomentStats compute_moments(const Corpus& corpus, const LexiconPair& pair,
                            const std::vector<double>& mu,
                            const CorpusStats& stats) {
  MomentStats m;
  auto counts = cross_label_counts(corpus, pair);
  m.c0 = std::move(counts.first);
  m.c1 = std::move(counts.second);
  m.s = stats.pair_weight;

  auto fill_mu = [&mu](const std::vector<WordId>& lex, const char* side) {
    std::vector<double> out;
    out.reserve(lex.size());
    for (WordId id : lex) {
      const double v = mu.at(id);
      if (v <= 0)
        fail_validation(std::string("lexicon word on side ") + side +
                        " has zero baseline probability (id " +
                        std::to_string(id) + "); prune first");
      out.push_back(v);
    }
    return out;
  };
  m.mu0 = fill_mu(pair.lex0, "0");
  m.mu1 = fill_mu(pair.lex1, "1");
  for (double v : m.mu0) m.coverage0 += v;
  for (double v : m.mu1) m.coverage1 += v;

  const double s = to_double(m.s);
  m.r0.resize(m.c0.size());
  m.r1.resize(m.c1.size());
  for (std::size_t i = 0; i < m.c0.size(); ++i)
    m.r0[i] = static_cast<double>(m.c0[i]) - s * m.mu0[i] * m.coverage1;
  for (std::size_t j = 0; j < m.c1.size(); ++j)
    m.r1[j] = static_cast<double>(m.c1[j]) - s * m.mu1[j] * m.coverage0;
  return m;
}

double expected_pair_product(std::int64_t n_tokens, double theta_i,
                             double theta_j) {
  const double n = static_cast<double>(n_tokens);
  return n * (n - 1.0) * theta_i * theta_j;
}

double expected_cross_count(int side, std::size_t index,
                            const std::vector<double>& g0,
                            const std::vector<double>& g1,
                            const MomentStats& stats) {
  const std::vector<double>& own_mu = side == 0 ? stats.mu0 : stats.mu1;
  const std::vector<double>& own_g = side == 0 ? g0 : g1;
  const std::vector<double>& opp_mu = side == 0 ? stats.mu1 : stats.mu0;
  const std::vector<double>& opp_g = side == 0 ? g1 : g0;
  const double s = to_double(stats.s);
  const double gi = own_g.at(index);
  double sum = 0;
  for (std::size_t j = 0; j < opp_mu.size(); ++j)
    sum += opp_mu[j] * (1.0 - gi * opp_g[j]);
  return s * own_mu.at(index) * sum;
}

double objective(const std::vector<double>& g0, const std::vector<double>& g1,
                 const MomentStats& stats) {
  if (g0.size() != stats.size0() || g1.size() != stats.size1())
    fail_validation("gamma vector length does not match moment statistics");
  const double s = to_double(stats.s);
  double a1 = 0;  // sum over lex1 of mu_j g_j
  for (std::size_t j = 0; j < g1.size(); ++j) a1 += stats.mu1[j] * g1[j];
  double a0 = 0;
  for (std::size_t i = 0; i < g0.size(); ++i) a0 += stats.mu0[i] * g0[i];

  // c_i - E[c_i] = r_i + s mu_i g_i * (opposite mu.g); summing squares.
  double j_value = 0;
  for (std::size_t i = 0; i < g0.size(); ++i) {
    const double miss = stats.r0[i] + s * stats.mu0[i] * g0[i] * a1;
    j_value += 0.5 * miss * miss;
  }
  for (std::size_t j = 0; j < g1.size(); ++j) {
    const double miss = stats.r1[j] + s * stats.mu1[j] * g1[j] * a0;
    j_value += 0.5 * miss * miss;
  }
  return j_value;
}

std::string moments_to_json(const MomentStats& stats, const LexiconPair& pair,
                            const Vocabulary& vocab) {
  nlohmann::json j;
  j["c0"] = stats.c0;
  j["c1"] = stats.c1;
  j["r0"] = stats.r0;
  j["r1"] = stats.r1;
  j["mu0"] = stats.mu0;
  j["mu1"] = stats.mu1;
  j["coverage0"] = stats.coverage0;
  j["coverage1"] = stats.coverage1;
  if (stats.s > std::numeric_limits<std::int64_t>::max())
    fail_validation("pair weight too large to serialize");
  j["s"] = static_cast<std::int64_t>(stats.s);
  auto words = [&vocab](const std::vector<WordId>& lex) {
    std::vector<std::string> out;
    for (WordId id : lex) out.push_back(vocab.word(id));
    return out;
  };
  j["lex0"] = words(pair.lex0);
  j["lex1"] = words(pair.lex1);
  return j.dump(2);
}

}  // namespace problex
