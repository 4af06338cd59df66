// Test-only oracles and builders. Everything here is independent of the
// implementation paths it checks: the dense solver is plain Gaussian
// elimination, the normal CDF comes from Simpson quadrature, expectations
// come from exhaustive enumeration.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "problex/solver.hpp"
#include "problex/types.hpp"

namespace testsupport {

// --- corpus builders -----------------------------------------------------

using DocSpec = std::vector<std::pair<std::string, long long>>;

inline problex::Corpus make_corpus(const std::vector<DocSpec>& docs,
                                   const std::vector<int>& labels = {}) {
  problex::Corpus corpus;
  for (std::size_t t = 0; t < docs.size(); ++t) {
    std::vector<problex::CountVector::Entry> entries;
    for (const auto& [word, n] : docs[t])
      entries.emplace_back(corpus.vocab.add(word), n);
    corpus.docs.emplace_back(std::move(entries));
    corpus.ids.push_back(std::to_string(t));
  }
  for (int y : labels) corpus.labels.push_back(static_cast<std::int8_t>(y));
  corpus.check();
  return corpus;
}

// --- dense linear algebra oracle ----------------------------------------

/// Gaussian elimination with partial pivoting; dies on singular systems.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

inline std::vector<std::vector<double>> dense_matrix(
    const problex::QuadraticForm& form, double rho2) {
  const std::size_t n = form.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = form.diag[i] + rho2;
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] += form.lowrank_coef * form.lowrank_vec[i] * form.lowrank_vec[j];
  }
  return a;
}

// --- quadrature oracle ----------------------------------------------------

/// Standard normal CDF by Simpson's rule on [-12, z].
inline double normal_cdf_quadrature(double z) {
  const double lo = -12.0;
  const int n = 240000;  // even; error O(h^4) ~ 1e-15 at this step
  const double h = (z - lo) / n;
  auto density = [](double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
  };
  double s = density(lo) + density(z);
  for (int i = 1; i < n; ++i) s += density(lo + h * i) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// --- exhaustive multinomial enumeration -----------------------------------

/// Visits every count vector of v cells summing to n with its multinomial
/// probability under theta.
inline void enumerate_multinomial(
    std::int64_t n, const std::vector<double>& theta,
    const std::function<void(const std::vector<std::int64_t>&, double)>& visit) {
  const std::size_t v = theta.size();
  std::vector<std::int64_t> counts(v, 0);
  auto factorial = [](std::int64_t k) {
    double f = 1;
    for (std::int64_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
  };
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t cell,
                                                           std::int64_t left) {
    if (cell + 1 == v) {
      counts[cell] = left;
      double p = factorial(n);
      for (std::size_t i = 0; i < v; ++i)
        p *= std::pow(theta[i], static_cast<double>(counts[i])) /
             factorial(counts[i]);
      visit(counts, p);
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      counts[cell] = k;
      rec(cell + 1, left - k);
    }
  };
  rec(0, n);
}

// --- finite differences ----------------------------------------------------

/// Central-difference gradient of f at x.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double step = 1e-5) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + step;
    const double hi = f(x);
    x[i] = orig - step;
    const double lo = f(x);
    x[i] = orig;
    grad[i] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

}  // namespace testsupport
