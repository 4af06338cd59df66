#include "problex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace problex {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// 1/2 g^T P g + q.g for the structured form.
double quad_value(const QuadraticForm& form, const std::vector<double>& g) {
  double value = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    value += 0.5 * form.diag[i] * g[i] * g[i] + form.linear[i] * g[i];
  const double mg = dot(form.lowrank_vec, g);
  value += 0.5 * form.lowrank_coef * mg * mg;
  return value;
}

}  // namespace

QuadraticForm build_quadratic(int side, const std::vector<double>& gamma_other,
                              const MomentStats& stats, double rho, double u) {
  const std::vector<double>& own_mu = side == 0 ? stats.mu0 : stats.mu1;
  const std::vector<double>& own_r = side == 0 ? stats.r0 : stats.r1;
  const std::vector<double>& opp_mu = side == 0 ? stats.mu1 : stats.mu0;
  const std::vector<double>& opp_r = side == 0 ? stats.r1 : stats.r0;
  if (gamma_other.size() != opp_mu.size())
    fail_validation("gamma_other length does not match the opposite lexicon");

  const double s = to_double(stats.s);
  double mu_dot_g = 0, musq_gsq = 0, r_mu_g = 0;
  for (std::size_t j = 0; j < opp_mu.size(); ++j) {
    const double mg = opp_mu[j] * gamma_other[j];
    mu_dot_g += mg;
    musq_gsq += mg * mg;
    r_mu_g += opp_r[j] * mg;
  }
  const double a = s * mu_dot_g;
  const double b = s * s * musq_gsq;
  const double c_r = s * r_mu_g;

  QuadraticForm form;
  const std::size_t n = own_mu.size();
  form.diag.resize(n);
  form.linear.resize(n);
  form.lowrank_vec = own_mu;
  form.lowrank_coef = b + rho;
  const double q_const = rho * (u - mu_dot_g);
  for (std::size_t i = 0; i < n; ++i) {
    form.diag[i] = a * a * own_mu[i] * own_mu[i];
    form.linear[i] = a * own_r[i] * own_mu[i] + c_r * own_mu[i] +
                     q_const * own_mu[i];
  }
  return form;
}

std::vector<double> solve_diag_plus_rank1(const QuadraticForm& form,
                                          double rho2,
                                          const std::vector<double>& a_aux,
                                          const std::vector<double>& v_dual) {
  const std::size_t n = form.size();
  if (a_aux.size() != n || v_dual.size() != n)
    fail_validation("auxiliary vector length mismatch in rank-one solve");
  if (!all_finite(form.diag) || !all_finite(form.linear) ||
      !all_finite(form.lowrank_vec) || !std::isfinite(form.lowrank_coef) ||
      !all_finite(a_aux) || !all_finite(v_dual) || !std::isfinite(rho2))
    fail_validation("non-finite input to rank-one solve");

  // (D + kappa m m^T) g = y with D = Diag(diag) + rho2 I:
  // g = D^-1 y - D^-1 m * kappa (m . D^-1 y) / (1 + kappa m . D^-1 m).
  std::vector<double> dinv_y(n), dinv_m(n);
  double m_dinv_y = 0, m_dinv_m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = form.diag[i] + rho2;
    if (!(d > 0)) fail_validation("singular diagonal in rank-one solve");
    const double y = rho2 * (a_aux[i] - v_dual[i]) - form.linear[i];
    dinv_y[i] = y / d;
    dinv_m[i] = form.lowrank_vec[i] / d;
    m_dinv_y += form.lowrank_vec[i] * dinv_y[i];
    m_dinv_m += form.lowrank_vec[i] * dinv_m[i];
  }
  const double scale =
      form.lowrank_coef * m_dinv_y / (1.0 + form.lowrank_coef * m_dinv_m);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = dinv_y[i] - scale * dinv_m[i];
  return g;
}

std::vector<double> project_box(std::vector<double> gamma, double eps) {
  const double hi = 1.0 - eps;
  for (double& g : gamma) {
    if (std::isnan(g)) fail_validation("NaN in box projection");
    g = std::clamp(g, 0.0, hi);
  }
  return gamma;
}

InnerResult inner_admm(const QuadraticForm& form, const SolverConfig& config) {
  const std::size_t n = form.size();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<double> gamma(n, 0.0), a(n, 0.0), v(n, 0.0);
  double rho2 = config.rho2_init;

  InnerResult result;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_gamma(n, 0.0);

  for (int k = 1; k <= config.max_inner; ++k) {
    gamma = solve_diag_plus_rank1(form, rho2, a, v);
    std::vector<double> a_prev = a;
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = gamma[i] + v[i];
    a = project_box(std::move(shifted), config.box_epsilon);
    double primal_sq = 0, dual_sq = 0, v_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += gamma[i] - a[i];
      const double pr = gamma[i] - a[i];
      const double du = a[i] - a_prev[i];
      primal_sq += pr * pr;
      dual_sq += du * du;
      v_sq += v[i] * v[i];
    }
    const double primal = std::sqrt(primal_sq);
    const double dual = rho2 * std::sqrt(dual_sq);
    result.iterations = k;

    std::vector<double> projected = project_box(gamma, config.box_epsilon);
    const double value = quad_value(form, projected);
    if (value < best_value) {
      best_value = value;
      best_gamma = projected;
    }

    const double eps_pri =
        sqrt_n * config.abs_tol +
        config.rel_tol * std::max(norm2(gamma), norm2(a));
    const double eps_dual =
        sqrt_n * config.abs_tol + config.rel_tol * rho2 * std::sqrt(v_sq);
    if (primal <= eps_pri && dual <= eps_dual) {
      result.converged = true;
      result.gamma = std::move(projected);
      return result;
    }

    // Penalty adaptation; v is the scaled dual, so it rescales inversely.
    if (primal > config.penalty_ratio * dual) {
      rho2 *= config.penalty_factor;
      for (double& vi : v) vi /= config.penalty_factor;
    } else if (dual > config.penalty_ratio * primal) {
      rho2 /= config.penalty_factor;
      for (double& vi : v) vi *= config.penalty_factor;
    }
  }
  result.converged = false;
  result.gamma = std::move(best_gamma);
  return result;
}

SolverResult fit(const MomentStats& stats, const SolverConfig& config) {
  const std::size_t n0 = stats.size0(), n1 = stats.size1();
  if (n0 == 0 || n1 == 0) fail_validation("both lexicons must be non-empty");
  for (double m : stats.mu0)
    if (!(m > 0)) fail_validation("zero baseline probability on side 0");
  for (double m : stats.mu1)
    if (!(m > 0)) fail_validation("zero baseline probability on side 1");

  // Starting from the box midpoint: gamma == 0 is a stationary point of the
  // alternation (each one-sided subproblem is flat when the other side is
  // zero, since the moments depend on gamma only through pair products).
  std::vector<double> g0(n0, 0.5), g1(n1, 0.5);
  double u = 0;
  double rho = config.rho_init;

  SolverResult result;
  double j_prev = std::numeric_limits<double>::infinity();
  // The alternation can orbit the solution at moderate rho, with transient
  // dual spikes as the gap changes sign; rho is lowered only after the dual
  // residual dominates persistently.
  constexpr int kDecreasePatience = 10;
  int dual_streak = 0;

  for (int k = 1; k <= config.max_outer; ++k) {
    QuadraticForm form0 = build_quadratic(0, g1, stats, rho, u);
    InnerResult inner0 = inner_admm(form0, config);
    // Dual residual: iterate movement measured in coverage units, the same
    // scale as the primal gap. Unlike rho-scaled movement this cannot stall
    // the ratio test while the constraint is still slack.
    double dual = std::abs(dot(stats.mu0, inner0.gamma) - dot(stats.mu0, g0));
    g0 = inner0.gamma;
    result.inner_iterations += inner0.iterations;

    QuadraticForm form1 = build_quadratic(1, g0, stats, rho, -u);
    InnerResult inner1 = inner_admm(form1, config);
    dual += std::abs(dot(stats.mu1, inner1.gamma) - dot(stats.mu1, g1));
    g1 = inner1.gamma;
    result.inner_iterations += inner1.iterations;

    const double dot0 = dot(stats.mu0, g0);
    const double dot1 = dot(stats.mu1, g1);
    const double gap = dot0 - dot1;
    u += gap;
    const double primal = std::abs(gap);
    const double j_value = objective(g0, g1, stats);

    if (!std::isfinite(j_value) || !std::isfinite(gap) || !std::isfinite(u) ||
        !all_finite(g0) || !all_finite(g1)) {
      std::ostringstream msg;
      msg << "solver diverged at outer iteration " << k << " (J=" << j_value
          << ", constraint gap=" << gap << ", rho=" << rho << ")";
      fail_convergence(msg.str());
    }

    result.history.push_back({k, j_value, primal, dual, rho});
    result.outer_iterations = k;

    // Primal threshold sits at half the documented residual contract,
    // |mu0.g0 - mu1.g1| <= max(10 abs_tol, rel_tol |mu0.g0|).
    const double eps_pri =
        0.5 * std::max(10.0 * config.abs_tol, config.rel_tol * std::abs(dot0));
    const double eps_dual =
        config.abs_tol +
        config.rel_tol * std::max(std::abs(dot0), std::abs(dot1));
    const bool j_stable = std::abs(j_value - j_prev) <=
                          config.abs_tol + config.rel_tol * std::abs(j_prev);
    j_prev = j_value;

    if (primal <= eps_pri && dual <= eps_dual && j_stable) {
      result.converged = true;
      break;
    }

    if (primal > config.penalty_ratio * dual) {
      rho *= config.penalty_factor;
      u /= config.penalty_factor;
      dual_streak = 0;
    } else if (dual > config.penalty_ratio * primal) {
      if (++dual_streak >= kDecreasePatience) {
        rho /= config.penalty_factor;
        u *= config.penalty_factor;
        dual_streak = 0;
      }
    } else {
      dual_streak = 0;
    }
  }

  result.g0 = std::move(g0);
  result.g1 = std::move(g1);
  result.objective = objective(result.g0, result.g1, stats);
  result.constraint_residual =
      std::abs(dot(stats.mu0, result.g0) - dot(stats.mu1, result.g1));
  return result;
}

}  // namespace problex
