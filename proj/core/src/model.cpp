#include "problex/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace problex {

namespace {

struct KahanSum {
  double sum = 0, carry = 0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

bool contains(const std::vector<WordId>& sorted, WordId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

double margin_count(const CountVector& x, const LexiconPair& pair) {
  Count margin = 0;
  for (const auto& [id, n] : x.entries()) {
    if (contains(pair.lex1, id)) margin += n;
    if (contains(pair.lex0, id)) margin -= n;
  }
  return static_cast<double>(margin);
}

double margin_presence(const CountVector& x, const LexiconPair& pair) {
  Count margin = 0;
  for (const auto& [id, n] : x.entries()) {
    if (n <= 0) continue;
    if (contains(pair.lex1, id)) margin += 1;
    if (contains(pair.lex0, id)) margin -= 1;
  }
  return static_cast<double>(margin);
}

int decide(double score) {
  if (std::isnan(score)) fail_validation("cannot decide on a NaN score");
  return score > 0 ? 1 : 0;
}

double predictiveness_weight(double gamma) {
  return std::log1p(gamma) - std::log1p(-gamma);
}

void PredictivenessModel::check() const {
  auto check_side = [](const std::vector<std::string>& words,
                       const std::vector<double>& mu,
                       const std::vector<double>& g, const char* side) {
    if (words.empty())
      fail_validation(std::string("model lexicon ") + side + " is empty");
    if (mu.size() != words.size() || g.size() != words.size())
      fail_validation(std::string("model arrays disagree on side ") + side);
    for (double m : mu)
      if (!(m > 0))
        fail_validation(std::string("model mu must be positive on side ") +
                        side);
    for (double v : g)
      if (!(v >= 0 && v < 1))
        fail_validation(std::string("model gamma outside [0, 1) on side ") +
                        side);
  };
  check_side(words0, mu0, g0, "0");
  check_side(words1, mu1, g1, "1");
  std::set<std::string> seen(words0.begin(), words0.end());
  for (const std::string& w : words1)
    if (seen.count(w))
      fail_validation("model lexicons are not disjoint: '" + w + "'");
  if (global_gamma && !(*global_gamma >= 0 && *global_gamma < 1))
    fail_validation("global gamma outside [0, 1)");
  if (tau && !(*tau > 0)) fail_validation("tau must be positive");
  if (!std::isfinite(prior_logodds))
    fail_validation("prior log odds must be finite");
}

Scorer::Scorer(const PredictivenessModel& model, const Vocabulary& vocab)
    : prior_(model.prior_logodds),
      global_gamma_(model.global_gamma),
      tau_(model.tau) {
  model.check();
  if (global_gamma_) global_weight_ = predictiveness_weight(*global_gamma_);
  const double tau = tau_.value_or(0.0);

  auto add_side = [&](const std::vector<std::string>& words,
                      const std::vector<double>& mu,
                      const std::vector<double>& g, std::int8_t side) {
    for (std::size_t k = 0; k < words.size(); ++k) {
      const auto id = vocab.find(words[k]);
      if (!id) continue;  // absent from this corpus, can never be scored
      const double gamma = global_gamma_ ? *global_gamma_ : g[k];
      Slot slot;
      slot.side = side;
      slot.sign = side == 1 ? 1.0 : -1.0;
      slot.weight = predictiveness_weight(gamma);
      slot.alpha_in = tau * (1.0 + gamma) * mu[k];
      slot.alpha_out = tau * (1.0 - gamma) * mu[k];
      slots_.emplace(*id, slot);
    }
  };
  add_side(model.words0, model.mu0, model.g0, 0);
  add_side(model.words1, model.mu1, model.g1, 1);
}

double Scorer::margin_count(const CountVector& x) const {
  Count margin = 0;
  for (const auto& [id, n] : x.entries()) {
    auto it = slots_.find(id);
    if (it == slots_.end()) continue;
    margin += it->second.side == 1 ? n : -n;
  }
  return static_cast<double>(margin);
}

double Scorer::margin_presence(const CountVector& x) const {
  Count margin = 0;
  for (const auto& [id, n] : x.entries()) {
    if (n <= 0) continue;
    auto it = slots_.find(id);
    if (it == slots_.end()) continue;
    margin += it->second.side == 1 ? 1 : -1;
  }
  return static_cast<double>(margin);
}

double Scorer::score_mult(const CountVector& x) const {
  // The uniform model is exactly proportional to the count margin; computing
  // it that way keeps the proportionality bit-exact.
  if (global_gamma_) return global_weight_ * margin_count(x) + prior_;
  KahanSum sum;
  for (const auto& [id, n] : x.entries()) {
    auto it = slots_.find(id);
    if (it == slots_.end()) continue;
    sum.add(it->second.sign * static_cast<double>(n) * it->second.weight);
  }
  return sum.sum + prior_;
}

double Scorer::score_dcm(const CountVector& x) const {
  if (!tau_) fail_validation("DCM scoring requires a concentration tau");
  KahanSum sum;
  for (const auto& [id, n] : x.entries()) {
    if (n <= 0) continue;
    auto it = slots_.find(id);
    if (it == slots_.end()) continue;
    const Slot& slot = it->second;
    const double k = static_cast<double>(n);
    const double in_part =
        std::lgamma(k + slot.alpha_in) - std::lgamma(slot.alpha_in);
    const double out_part =
        std::lgamma(k + slot.alpha_out) - std::lgamma(slot.alpha_out);
    sum.add(slot.sign * (in_part - out_part));
  }
  return sum.sum + prior_;
}

double Scorer::score(const std::string& rule, const CountVector& x) const {
  if (rule == "count") return margin_count(x);
  if (rule == "presence") return margin_presence(x);
  if (rule == "mult") return score_mult(x);
  if (rule == "dcm") return score_dcm(x);
  fail_validation("unknown rule: " + rule);
}

TauEstimate estimate_concentration(const Corpus& corpus,
                                   const LexiconPair& pair,
                                   const std::vector<double>& mu,
                                   const TauSearch& search) {
  const std::size_t vocab_size = corpus.vocab.size();
  std::vector<char> in_lexicon(vocab_size, 0);
  for (WordId id : pair.lex0) in_lexicon.at(id) = 1;
  for (WordId id : pair.lex1) in_lexicon.at(id) = 1;

  double out_mass = 0;
  for (std::size_t i = 0; i < vocab_size; ++i)
    if (!in_lexicon[i]) out_mass += mu.at(i);
  if (!(out_mass > 0))
    fail_validation("no out-of-lexicon probability mass; tau unidentifiable");

  // Count histograms: per word, how many documents have count k; plus the
  // histogram of out-of-lexicon document totals.
  std::map<Count, std::int64_t> total_hist;
  std::vector<std::map<Count, std::int64_t>> word_hist(vocab_size);
  std::int64_t informative_docs = 0;
  for (const CountVector& doc : corpus.docs) {
    Count n_out = 0;
    for (const auto& [id, n] : doc.entries()) {
      if (static_cast<std::size_t>(id) >= vocab_size || in_lexicon[id])
        continue;
      n_out += n;
      word_hist[id][n] += 1;
    }
    total_hist[n_out] += 1;
    if (n_out >= 2) ++informative_docs;
  }
  if (informative_docs == 0)
    fail_validation(
        "tau unidentifiable: no document has two or more out-of-lexicon "
        "tokens");

  struct Cell {
    double mu_tilde;
    double count;
    double docs;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (in_lexicon[i] || word_hist[i].empty()) continue;
    const double mu_tilde = mu[i] / out_mass;
    for (const auto& [k, docs] : word_hist[i])
      cells.push_back({mu_tilde, static_cast<double>(k),
                       static_cast<double>(docs)});
  }

  auto loglik = [&](double tau) {
    double ll = 0;
    for (const auto& [n, docs] : total_hist) {
      if (n == 0) continue;
      ll += static_cast<double>(docs) *
            (std::lgamma(tau) - std::lgamma(static_cast<double>(n) + tau));
    }
    for (const Cell& cell : cells) {
      const double alpha = tau * cell.mu_tilde;
      ll += cell.docs * (std::lgamma(cell.count + alpha) - std::lgamma(alpha));
    }
    return ll;
  };

  // Golden-section maximization over log tau.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(search.lo), hi = std::log(search.hi);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = loglik(std::exp(x1));
  double f2 = loglik(std::exp(x2));
  for (int it = 0; it < search.iterations && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = loglik(std::exp(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = loglik(std::exp(x1));
    }
  }

  TauEstimate est;
  est.tau = std::exp(0.5 * (lo + hi));
  est.loglik = loglik(est.tau);
  est.low_confidence = informative_docs < 2;
  return est;
}

std::string corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (v >> (8 * b)) & 0xff;
      hash *= 0x100000001b3ULL;
    }
  };
  auto mix_str = [&hash](const std::string& s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  mix(corpus.docs.size());
  for (std::size_t t = 0; t < corpus.docs.size(); ++t) {
    if (t < corpus.ids.size()) mix_str(corpus.ids[t]);
    mix(t < corpus.labels.size()
            ? static_cast<std::uint64_t>(corpus.labels[t] + 2)
            : 0);
    for (const auto& [id, n] : corpus.docs[t].entries()) {
      mix(static_cast<std::uint64_t>(id));
      mix(static_cast<std::uint64_t>(n));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace problex
