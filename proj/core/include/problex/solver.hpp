#pragma once

#include <cstdint>
#include <vector>

#include "problex/moments.hpp"

namespace problex {

/// Quadratic form P = Diag(diag) + lowrank_coef * m m^T, linear term q.
/// The gradient of the one-sided augmented Lagrangian at gamma is
/// P gamma + q.
struct QuadraticForm {
  std::vector<double> diag;
  double lowrank_coef = 0;
  std::vector<double> lowrank_vec;
  std::vector<double> linear;

  std::size_t size() const { return diag.size(); }
};

struct SolverConfig {
  double rho_init = 1.0;    // outer penalty (equality constraint)
  double rho2_init = 1.0;   // inner penalty (box constraint)
  double abs_tol = 1e-6;
  double rel_tol = 1e-4;
  int max_outer = 500;
  int max_inner = 200;
  double box_epsilon = 1e-6;     // box is [0, 1 - box_epsilon]
  double penalty_factor = 2.0;   // multiply/divide step for rho adaptation
  double penalty_ratio = 10.0;   // adapt when primal/dual ratio exceeds this
  std::uint64_t seed = 0;        // reserved; the solve itself is deterministic
};

struct TraceRow {
  int iteration = 0;
  double objective = 0;
  double primal = 0;
  double dual = 0;
  double rho = 0;
};

struct SolverResult {
  std::vector<double> g0, g1;      // fitted predictiveness, in the box
  double objective = 0;            // J at the fitted point
  double constraint_residual = 0;  // |mu0.g0 - mu1.g1|
  int outer_iterations = 0;
  std::int64_t inner_iterations = 0;
  bool converged = false;
  std::vector<TraceRow> history;
};

/// Assembles the quadratic form for one side given the other side fixed.
/// With a = s * sum_opp(mu_j g_j), b = s^2 * sum_opp(mu_j^2 g_j^2),
/// c_r = s * sum_opp(r_j mu_j g_j):
///   diag_i      = a^2 mu_i^2
///   lowrank     = (b + rho) * mu_side mu_side^T
///   linear_i    = a r_i mu_i + c_r mu_i + rho (u - mu_other . g_other) mu_i
/// Callers pass -u for side 1.
QuadraticForm build_quadratic(int side, const std::vector<double>& gamma_other,
                              const MomentStats& stats, double rho, double u);

/// argmin over gamma of 1/2 g^T P g + q.g + rho2/2 ||g - a + v||^2, i.e.
/// (P + rho2 I)^-1 (rho2 (a - v) - q), via the rank-one Woodbury correction
/// to the diagonal inverse. Requires diag_i + rho2 > 0 and finite inputs.
std::vector<double> solve_diag_plus_rank1(const QuadraticForm& form,
                                          double rho2,
                                          const std::vector<double>& a_aux,
                                          const std::vector<double>& v_dual);

/// Elementwise clamp to [0, 1 - eps]. NaN input is an error.
std::vector<double> project_box(std::vector<double> gamma, double eps);

struct InnerResult {
  std::vector<double> gamma;
  int iterations = 0;
  bool converged = false;
};

/// Box-constrained minimization of the quadratic form by ADMM splitting;
/// on iteration-limit hit returns the best projected iterate seen.
InnerResult inner_admm(const QuadraticForm& form, const SolverConfig& config);

/// Full nested-ADMM fit of per-word predictiveness from moment statistics.
/// Alternates the two one-sided box-constrained solves, then updates the
/// scalar dual u for the cross-lexicon coverage constraint
/// mu0.g0 - mu1.g1 = 0, adapting rho from the primal/dual residual ratio.
SolverResult fit(const MomentStats& stats, const SolverConfig& config = {});

}  // namespace problex
