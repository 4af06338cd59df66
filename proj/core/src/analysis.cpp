#include "problex/analysis.hpp"

#include <cmath>

namespace problex {

MarginMoments margin_moments(double gamma, std::int64_t n_tokens,
                             double coverage) {
  if (!(gamma >= 0 && gamma < 1))
    fail_validation("gamma must lie in [0, 1)");
  if (n_tokens < 0) fail_validation("token count must be non-negative");
  if (!(coverage > 0 && coverage <= 0.5))
    fail_validation("lexicon coverage must lie in (0, 0.5]");
  const double n = static_cast<double>(n_tokens);
  MarginMoments m;
  m.mean = 2.0 * n * gamma * coverage;
  m.variance_bound = 2.0 * n * coverage;
  m.z_lower = gamma * std::sqrt(2.0 * n * coverage);
  return m;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double expected_accuracy_lower_bound(double gamma, std::int64_t n_tokens,
                                     double coverage) {
  return normal_cdf(margin_moments(gamma, n_tokens, coverage).z_lower);
}

double effective_count(std::int64_t x, double tau, double mu, double gamma) {
  if (x < 0) fail_validation("count must be non-negative");
  if (!(tau > 0)) fail_validation("tau must be positive");
  if (!(mu > 0 && mu < 1)) fail_validation("mu must lie in (0, 1)");
  if (!(gamma > 0 && gamma < 1))
    fail_validation(gamma == 0 ? "uninformative word"
                               : "gamma must lie in [0, 1)");
  const double alpha_in = tau * (1.0 + gamma) * mu;
  const double alpha_out = tau * (1.0 - gamma) * mu;
  auto contribution = [&](double k) {
    return (std::lgamma(k + alpha_in) - std::lgamma(alpha_in)) -
           (std::lgamma(k + alpha_out) - std::lgamma(alpha_out));
  };
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;
  return contribution(static_cast<double>(x)) / contribution(1.0);
}

}  // namespace problex
