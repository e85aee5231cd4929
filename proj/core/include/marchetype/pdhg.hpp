#pragma once

#include <cstdint>
#include <vector>

#include "marchetype/sparse.hpp"
#include "marchetype/targeting.hpp"

namespace marchetype {

// Primal-dual iterate of the two-loop scheme. x lives in the unit box, y is
// nonnegative; the averages are uniform means over the inner iterates of the
// current outer loop (the loop anchor itself is excluded).
struct SaddleState {
  DenseVector x;
  DenseVector y;
  DenseVector x_avg;
  DenseVector y_avg;
  Index inner_count = 0;          // t
  Index outer_count = 0;          // n
  DenseVector anchor_x;           // z^{n,0}
  DenseVector anchor_y;
  double prev_anchor_distance = 0.0;  // |z^{n,0} - z^{n-1,0}|_inf
  double anchor_gap = 0.0;            // normalized gap at the restart reference

  static SaddleState zero(Index n_vars, Index n_rows);
};

struct SolverConfig {
  double tolerance = 1e-6;
  Index max_outer = 100000;
  Index max_inner = 0;               // 0 means the default cap 4 * (W + L)
  Index max_total_iterations = 1000000;
  double step_safety = 0.9;          // in (0, 1)
  bool rescale = true;
  int ruiz_iterations = 10;
  int power_iterations = 100;
  std::uint64_t seed = 0;
  bool enable_restarts = true;       // off gives the plain one-loop baseline
};

enum class SolveStatus { optimal, iteration_limit, numerical_failure };

std::string to_string(SolveStatus status);

struct KktResiduals {
  double primal_residual = 0.0;  // |(Gx - h)^+|_inf / (1 + |h|_inf)
  double dual_residual = 0.0;    // |x - proj(x - (p + G^T y))|_inf / (1 + |p|_inf)
  double relative_gap = 0.0;     // |p.x - D(y)| / (1 + |p.x| + |D(y)|)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

// One convergence-log record per gap evaluation.
struct TraceRow {
  Index total_iter = 0;
  Index outer = 0;
  Index inner = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  double rho = 0.0;              // normalized duality gap at the candidate
  double objective = 0.0;
  double dual_objective = 0.0;
  double elapsed_seconds = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::iteration_limit;
  DenseVector primal;
  DenseVector dual;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  Index iterations = 0;
  Index restarts = 0;
  std::vector<double> per_restart_gap;     // reference gap at each outer-loop start
  std::vector<bool> gap_triggered;         // whether outer loop n ended on the gap test
  std::vector<TraceRow> trace;
  double wall_seconds = 0.0;
};

// Coordinatewise clamp to the unit box.
DenseVector project_primal(const DenseVector& v);
// Coordinatewise max with zero.
DenseVector project_dual(const DenseVector& v);

// One PDHG update at step sizes eta (primal) and tau (dual):
//   x+ = proj_X(x - eta p - eta G^T y)
//   y+ = proj_Y(y - tau h + tau G (2 x+ - x))
// Exactly two matrix-vector products. Updates the running averages and the
// inner counter. Throws std::runtime_error on a non-finite intermediate.
SaddleState pdhg_step(SaddleState state, const StandardLP& lp, double eta, double tau);

// Lower bound on the primal optimum for any y >= 0:
//   D(y) = -h.y + sum_w min(0, (p + G^T y)_w).
double dual_objective(const StandardLP& lp, const DenseVector& y);

// Normalized duality gap rho_r(z) over the radius-r l-inf ball intersected
// with the feasible boxes, evaluated in closed form with two matrix-vector
// products. Throws std::invalid_argument when r <= 0.
double normalized_duality_gap(const StandardLP& lp, const DenseVector& x, const DenseVector& y,
                              double r);

KktResiduals kkt_residuals(const StandardLP& lp, const DenseVector& x, const DenseVector& y);

// Two-loop restarted PDHG. The inner loop runs PDHG steps and averaging; the
// outer loop restarts from the average when the normalized duality gap at the
// candidate halves against the loop's reference gap, or when the inner cap is
// reached. Step sizes are fixed at step_safety / |G|_2 (estimated). With
// rescale on, the equilibrated problem is solved internally and both the
// solution and the reported residuals are mapped back to original
// coordinates. Termination tests all three KKT residuals against tolerance
// at averaged candidates in original coordinates.
SolveReport solve(const StandardLP& lp, const SolverConfig& config);

}  // namespace marchetype
