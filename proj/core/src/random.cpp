#include "problex/random.hpp"

#include <cmath>

#include "problex/types.hpp"

namespace problex {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) fail_validation("uniform_index over empty range");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  have_spare_normal_ = true;
  return u * factor;
}

double Rng::gamma(double shape) {
  if (!(shape > 0)) fail_validation("gamma shape must be positive");
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) * U^(1/a).
    const double g = gamma(shape + 1.0);
    const double u = uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

std::int64_t Rng::poisson(double mean) {
  if (mean < 0) fail_validation("poisson mean must be non-negative");
  if (mean == 0) return 0;
  if (mean < 30.0) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }
  // Split recursively: Poisson(m) = Poisson(m/2) + Poisson(m/2).
  const std::int64_t half = poisson(mean / 2.0);
  return half + poisson(mean - mean / 2.0);
}

CategoricalSampler::CategoricalSampler(const std::vector<double>& weights) {
  if (weights.empty()) fail_validation("empty categorical distribution");
  cdf_.resize(weights.size());
  double running = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) fail_validation("negative categorical weight");
    running += weights[i];
    cdf_[i] = running;
  }
  if (!(running > 0)) fail_validation("categorical weights sum to zero");
  for (double& c : cdf_) c /= running;
  cdf_.back() = 1.0;
}

std::size_t CategoricalSampler::draw(Rng& rng) const {
  const double u = rng.uniform();
  std::size_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdf_[mid] <= u)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace problex
