#pragma once

#include <cstdint>
#include <vector>

namespace problex {

/// xoshiro256** seeded via splitmix64. Self-contained so that generated
/// corpora are reproducible independent of the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape);

  /// Knuth for small means, normal-rounded tail for large ones.
  std::int64_t poisson(double mean);

 private:
  std::uint64_t state_[4];
  bool have_spare_normal_ = false;
  double spare_normal_ = 0;
};

/// Cumulative-probability table for repeated categorical draws.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& weights);
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace problex
