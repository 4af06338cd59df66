#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "problex/analysis.hpp"
#include "problex/random.hpp"

namespace problex {

namespace {

void validate_spec(const SyntheticSpec& spec) {
  if (spec.vocab_size <= 0) fail_validation("vocab_size must be positive");
  if (spec.lex_size0 <= 0 || spec.lex_size1 <= 0)
    fail_validation("lexicon sizes must be positive");
  if (spec.lex_size0 + spec.lex_size1 > spec.vocab_size)
    fail_validation("lexicons do not fit in the vocabulary");
  if (spec.mu.size() != static_cast<std::size_t>(spec.vocab_size))
    fail_validation("mu length must equal vocab_size");
  double total = 0;
  for (double m : spec.mu) {
    if (m < 0) fail_validation("mu entries must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9)
    fail_validation("mu must sum to one");
  if (spec.gamma0.size() != static_cast<std::size_t>(spec.lex_size0) ||
      spec.gamma1.size() != static_cast<std::size_t>(spec.lex_size1))
    fail_validation("gamma lengths must match lexicon sizes");
  for (double g : spec.gamma0)
    if (!(g >= 0 && g < 1)) fail_validation("gamma0 outside [0, 1)");
  for (double g : spec.gamma1)
    if (!(g >= 0 && g < 1)) fail_validation("gamma1 outside [0, 1)");
  if (!(spec.prior1 >= 0 && spec.prior1 <= 1))
    fail_validation("prior must lie in [0, 1]");
  if (spec.docs < 0) fail_validation("document count must be non-negative");
}

// Scales the heavier side down so mu0.g0 == mu1.g1 and both theta vectors
// sum to one.
void project_gammas(const SyntheticSpec& spec, std::vector<double>& g0,
                    std::vector<double>& g1) {
  double a0 = 0, a1 = 0;
  for (int i = 0; i < spec.lex_size0; ++i) a0 += spec.mu[i] * g0[i];
  for (int j = 0; j < spec.lex_size1; ++j)
    a1 += spec.mu[spec.lex_size0 + j] * g1[j];
  if (a0 == 0 && a1 == 0) return;
  if (a0 == 0 || a1 == 0)
    fail_validation(
        "cannot project gamma onto the coverage constraint: one side has "
        "zero mu.gamma mass and the other does not");
  if (a0 > a1) {
    const double scale = a1 / a0;
    for (double& g : g0) g *= scale;
  } else {
    const double scale = a0 / a1;
    for (double& g : g1) g *= scale;
  }
}

std::vector<double> build_theta(const SyntheticSpec& spec,
                                const std::vector<double>& g0,
                                const std::vector<double>& g1, int label) {
  std::vector<double> theta(spec.mu);
  for (int i = 0; i < spec.lex_size0; ++i)
    theta[i] *= label == 0 ? (1.0 + g0[i]) : (1.0 - g0[i]);
  for (int j = 0; j < spec.lex_size1; ++j)
    theta[spec.lex_size0 + j] *= label == 1 ? (1.0 + g1[j]) : (1.0 - g1[j]);
  double total = 0;
  for (double t : theta) total += t;
  if (std::abs(total - 1.0) > 1e-6)
    fail_validation("theta does not sum to one after projection");
  for (double& t : theta) t /= total;
  return theta;
}

std::int64_t draw_length(const LengthSpec& length, Rng& rng) {
  if (const auto* fixed = std::get_if<FixedLength>(&length))
    return fixed->tokens;
  return rng.poisson(std::get<PoissonLength>(length).mean);
}

SyntheticCorpus generate(const SyntheticSpec& spec, bool dcm) {
  validate_spec(spec);
  if (dcm && !(spec.tau && *spec.tau > 0))
    fail_validation("DCM generation requires tau > 0");

  SyntheticCorpus out;
  out.gamma0 = spec.gamma0;
  out.gamma1 = spec.gamma1;
  project_gammas(spec, out.gamma0, out.gamma1);
  out.mu = spec.mu;

  for (WordId i = 0; i < spec.vocab_size; ++i)
    out.corpus.vocab.add("w" + std::to_string(i));
  for (WordId i = 0; i < spec.lex_size0; ++i) out.pair.lex0.push_back(i);
  for (WordId j = 0; j < spec.lex_size1; ++j)
    out.pair.lex1.push_back(spec.lex_size0 + j);

  const std::vector<double> theta0 = build_theta(spec, out.gamma0, out.gamma1, 0);
  const std::vector<double> theta1 = build_theta(spec, out.gamma0, out.gamma1, 1);
  const CategoricalSampler sampler0(theta0), sampler1(theta1);

  Rng rng(spec.seed);
  std::vector<Count> scratch(spec.vocab_size, 0);
  std::vector<WordId> touched;

  out.corpus.docs.reserve(spec.docs);
  out.corpus.ids.reserve(spec.docs);
  out.corpus.labels.reserve(spec.docs);
  for (std::int64_t t = 0; t < spec.docs; ++t) {
    const int y = rng.bernoulli(spec.prior1) ? 1 : 0;
    const std::int64_t n = draw_length(spec.length, rng);

    touched.clear();
    if (!dcm) {
      const CategoricalSampler& sampler = y == 1 ? sampler1 : sampler0;
      for (std::int64_t k = 0; k < n; ++k) {
        const WordId w = static_cast<WordId>(sampler.draw(rng));
        if (scratch[w] == 0) touched.push_back(w);
        scratch[w] += 1;
      }
    } else if (n > 0) {
      const std::vector<double>& theta = y == 1 ? theta1 : theta0;
      std::vector<double> nu(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i)
        nu[i] = rng.gamma(*spec.tau * theta[i]);
      const CategoricalSampler doc_sampler(nu);
      for (std::int64_t k = 0; k < n; ++k) {
        const WordId w = static_cast<WordId>(doc_sampler.draw(rng));
        if (scratch[w] == 0) touched.push_back(w);
        scratch[w] += 1;
      }
    }

    std::sort(touched.begin(), touched.end());
    std::vector<CountVector::Entry> entries;
    entries.reserve(touched.size());
    for (WordId w : touched) {
      entries.emplace_back(w, scratch[w]);
      scratch[w] = 0;
    }
    out.corpus.docs.emplace_back(std::move(entries));
    out.corpus.ids.push_back("d" + std::to_string(t));
    out.corpus.labels.push_back(static_cast<std::int8_t>(y));
  }
  return out;
}

}  // namespace

SyntheticCorpus gen_multinomial_corpus(const SyntheticSpec& spec) {
  return generate(spec, /*dcm=*/false);
}

SyntheticCorpus gen_dcm_corpus(const SyntheticSpec& spec) {
  return generate(spec, /*dcm=*/true);
}

SyntheticSpec synthetic_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("bad synthetic spec JSON: ") + e.what());
  }

  SyntheticSpec spec;
  spec.vocab_size = j.at("vocab_size").get<std::int32_t>();
  spec.lex_size0 = j.value("lex_size0", j.value("lex_size", 0));
  spec.lex_size1 = j.value("lex_size1", j.value("lex_size", 0));
  spec.docs = j.at("docs").get<std::int64_t>();
  spec.prior1 = j.value("prior", 0.5);
  spec.seed = j.value("seed", 0ULL);
  if (j.contains("tau") && !j["tau"].is_null())
    spec.tau = j["tau"].get<double>();

  if (j.contains("length")) {
    const auto& l = j["length"];
    if (l.contains("fixed"))
      spec.length = FixedLength{l["fixed"].get<std::int64_t>()};
    else if (l.contains("poisson"))
      spec.length = PoissonLength{l["poisson"].get<double>()};
    else
      fail_validation("length must have 'fixed' or 'poisson'");
  }

  // Parameter draws come from a stream separate from document sampling so
  // that explicit and drawn specs with the same seed sample identically.
  Rng param_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);

  const auto& mu_spec = j.at("mu");
  const std::string mu_kind = mu_spec.value("kind", "explicit");
  if (mu_kind == "explicit") {
    spec.mu = mu_spec.at("values").get<std::vector<double>>();
  } else if (mu_kind == "uniform_draw") {
    const double lo = mu_spec.value("low", 0.5);
    const double hi = mu_spec.value("high", 1.5);
    const double lex_scale = mu_spec.value("lexicon_scale", 1.0);
    spec.mu.resize(spec.vocab_size);
    const int lex_total = spec.lex_size0 + spec.lex_size1;
    double total = 0;
    for (int i = 0; i < spec.vocab_size; ++i) {
      double w = param_rng.uniform(lo, hi);
      if (i < lex_total) w *= lex_scale;
      spec.mu[i] = w;
      total += w;
    }
    for (double& m : spec.mu) m /= total;
  } else if (mu_kind == "fixed_coverage") {
    // Equal mass within each lexicon; remaining mass split over the rest.
    const double coverage = mu_spec.at("coverage").get<double>();
    if (!(coverage > 0 && 2 * coverage < 1))
      fail_validation("coverage must lie in (0, 0.5)");
    spec.mu.assign(spec.vocab_size, 0.0);
    for (int i = 0; i < spec.lex_size0; ++i)
      spec.mu[i] = coverage / spec.lex_size0;
    for (int jj = 0; jj < spec.lex_size1; ++jj)
      spec.mu[spec.lex_size0 + jj] = coverage / spec.lex_size1;
    const int rest = spec.vocab_size - spec.lex_size0 - spec.lex_size1;
    if (rest <= 0) fail_validation("no out-of-lexicon words");
    for (int i = spec.lex_size0 + spec.lex_size1; i < spec.vocab_size; ++i)
      spec.mu[i] = (1.0 - 2 * coverage) / rest;
  } else {
    fail_validation("unknown mu kind: " + mu_kind);
  }

  const auto& g_spec = j.at("gamma");
  const std::string g_kind = g_spec.value("kind", "explicit");
  if (g_kind == "explicit") {
    spec.gamma0 = g_spec.at("g0").get<std::vector<double>>();
    spec.gamma1 = g_spec.at("g1").get<std::vector<double>>();
  } else if (g_kind == "global") {
    const double g = g_spec.at("value").get<double>();
    spec.gamma0.assign(spec.lex_size0, g);
    spec.gamma1.assign(spec.lex_size1, g);
  } else if (g_kind == "uniform_draw") {
    const double lo = g_spec.value("low", 0.1);
    const double hi = g_spec.value("high", 0.9);
    spec.gamma0.resize(spec.lex_size0);
    spec.gamma1.resize(spec.lex_size1);
    for (double& g : spec.gamma0) g = param_rng.uniform(lo, hi);
    for (double& g : spec.gamma1) g = param_rng.uniform(lo, hi);
  } else {
    fail_validation("unknown gamma kind: " + g_kind);
  }
  return spec;
}

}  // namespace problex
