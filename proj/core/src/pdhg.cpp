#include "marchetype/pdhg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marchetype {

namespace {

// View of the problem the iteration operates on. x_upper is null for the
// unit box; the rescaled path substitutes per-column caps 1 / col_scale.
struct ProblemView {
  const SparseMatrix* matrix = nullptr;
  const DenseVector* objective = nullptr;
  const DenseVector* rhs = nullptr;
  const DenseVector* x_upper = nullptr;

  Index n_vars() const { return matrix->n_cols; }
  Index n_rows() const { return matrix->n_rows; }
  double upper(Index w) const {
    return x_upper ? (*x_upper)[static_cast<std::size_t>(w)] : 1.0;
  }
};

struct Scratch {
  DenseVector gty;     // length W
  DenseVector gx;      // length L
  DenseVector x_old;   // length W
  DenseVector y_old;   // length L

  explicit Scratch(const ProblemView& pb)
      : gty(static_cast<std::size_t>(pb.n_vars())),
        gx(static_cast<std::size_t>(pb.n_rows())),
        x_old(static_cast<std::size_t>(pb.n_vars())),
        y_old(static_cast<std::size_t>(pb.n_rows())) {}
};

// One PDHG update in place; exactly two matrix-vector products. Returns
// false when a non-finite value appears, leaving (x_old, y_old) intact.
bool step_in_place(const ProblemView& pb, DenseVector& x, DenseVector& y, double eta, double tau,
                   Scratch& s) {
  const DenseVector& p = *pb.objective;
  const DenseVector& h = *pb.rhs;
  const Index W = pb.n_vars();
  const Index L = pb.n_rows();

  s.x_old = x;
  s.y_old = y;

  spmv_transpose_into(*pb.matrix, y.data(), s.gty.data());
  bool finite = true;
  for (Index w = 0; w < W; ++w) {
    std::size_t i = static_cast<std::size_t>(w);
    double v = x[i] - eta * (p[i] + s.gty[i]);
    finite = finite && std::isfinite(v);
    x[i] = std::clamp(v, 0.0, pb.upper(w));
    // reuse gty as the extrapolated point 2 x+ - x_old
    s.gty[i] = 2.0 * x[i] - s.x_old[i];
  }
  if (!finite) {
    x = s.x_old;
    return false;
  }
  spmv_into(*pb.matrix, s.gty.data(), s.gx.data());
  for (Index l = 0; l < L; ++l) {
    std::size_t i = static_cast<std::size_t>(l);
    double v = y[i] - tau * h[i] + tau * s.gx[i];
    finite = finite && std::isfinite(v);
    y[i] = std::max(0.0, v);
  }
  if (!finite) {
    x = s.x_old;
    y = s.y_old;
    return false;
  }
  return true;
}

// Closed-form normalized duality gap over the radius-r l-inf ball
// intersected with the boxes; two matrix-vector products.
double gap_impl(const ProblemView& pb, const DenseVector& x, const DenseVector& y, double r,
                Scratch& s) {
  const DenseVector& p = *pb.objective;
  const DenseVector& h = *pb.rhs;

  spmv_into(*pb.matrix, x.data(), s.gx.data());
  spmv_transpose_into(*pb.matrix, y.data(), s.gty.data());

  double value = 0.0;
  for (Index l = 0; l < pb.n_rows(); ++l) {
    std::size_t i = static_cast<std::size_t>(l);
    double c = s.gx[i] - h[i];
    double y_best = c > 0.0 ? y[i] + r : std::max(0.0, y[i] - r);
    value += c * y_best;
  }
  for (Index w = 0; w < pb.n_vars(); ++w) {
    std::size_t i = static_cast<std::size_t>(w);
    double d = p[i] + s.gty[i];
    double x_best = d > 0.0 ? std::max(0.0, x[i] - r) : std::min(pb.upper(w), x[i] + r);
    value += p[i] * x[i] - d * x_best;
  }
  // L(x, y~) - L(x~, y) = p.x + y~.(Gx - h) - x~.(p + G^T y) + h.y
  value += dot(h, y);
  return value / r;
}

double dual_objective_impl(const ProblemView& pb, const DenseVector& y, Scratch& s) {
  const DenseVector& p = *pb.objective;
  spmv_transpose_into(*pb.matrix, y.data(), s.gty.data());
  double v = -dot(*pb.rhs, y);
  for (Index w = 0; w < pb.n_vars(); ++w) {
    std::size_t i = static_cast<std::size_t>(w);
    double d = p[i] + s.gty[i];
    if (d < 0.0) v += pb.upper(w) * d;
  }
  return v;
}

KktResiduals kkt_impl(const ProblemView& pb, const DenseVector& x, const DenseVector& y,
                      Scratch& s) {
  const DenseVector& p = *pb.objective;
  const DenseVector& h = *pb.rhs;

  KktResiduals k;
  spmv_into(*pb.matrix, x.data(), s.gx.data());
  double primal_inf = 0.0;
  for (Index l = 0; l < pb.n_rows(); ++l) {
    std::size_t i = static_cast<std::size_t>(l);
    primal_inf = std::max(primal_inf, s.gx[i] - h[i]);
  }
  k.primal_residual = std::max(0.0, primal_inf) / (1.0 + linf_norm(h));

  spmv_transpose_into(*pb.matrix, y.data(), s.gty.data());
  double dual_inf = 0.0;
  double dual_obj = -dot(h, y);
  for (Index w = 0; w < pb.n_vars(); ++w) {
    std::size_t i = static_cast<std::size_t>(w);
    double d = p[i] + s.gty[i];
    double moved = std::clamp(x[i] - d, 0.0, pb.upper(w));
    dual_inf = std::max(dual_inf, std::abs(x[i] - moved));
    if (d < 0.0) dual_obj += pb.upper(w) * d;
  }
  k.dual_residual = dual_inf / (1.0 + linf_norm(p));

  k.primal_objective = dot(p, x);
  k.dual_objective = dual_obj;
  k.relative_gap = std::abs(k.primal_objective - dual_obj) /
                   (1.0 + std::abs(k.primal_objective) + std::abs(dual_obj));
  return k;
}

ProblemView view_of(const StandardLP& lp) {
  ProblemView pb;
  pb.matrix = &lp.constraints;
  pb.objective = &lp.objective;
  pb.rhs = &lp.rhs;
  return pb;
}

}  // namespace

SaddleState SaddleState::zero(Index n_vars, Index n_rows) {
  SaddleState s;
  s.x.assign(static_cast<std::size_t>(n_vars), 0.0);
  s.y.assign(static_cast<std::size_t>(n_rows), 0.0);
  s.x_avg = s.x;
  s.y_avg = s.y;
  s.anchor_x = s.x;
  s.anchor_y = s.y;
  return s;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

DenseVector project_primal(const DenseVector& v) {
  require_finite(v, "project_primal input");
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], 0.0, 1.0);
  return out;
}

DenseVector project_dual(const DenseVector& v) {
  require_finite(v, "project_dual input");
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i]);
  return out;
}

SaddleState pdhg_step(SaddleState state, const StandardLP& lp, double eta, double tau) {
  if (eta <= 0.0 || tau <= 0.0) {
    throw std::invalid_argument("pdhg_step: step sizes must be positive");
  }
  ProblemView pb = view_of(lp);
  if (static_cast<Index>(state.x.size()) != pb.n_vars() ||
      static_cast<Index>(state.y.size()) != pb.n_rows()) {
    throw std::invalid_argument("pdhg_step: state dimensions do not match LP");
  }
  Scratch s(pb);
  if (!step_in_place(pb, state.x, state.y, eta, tau, s)) {
    throw std::runtime_error("pdhg_step: non-finite intermediate value");
  }
  state.inner_count += 1;
  double inv_t = 1.0 / static_cast<double>(state.inner_count);
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    state.x_avg[i] += (state.x[i] - state.x_avg[i]) * inv_t;
  }
  for (std::size_t i = 0; i < state.y.size(); ++i) {
    state.y_avg[i] += (state.y[i] - state.y_avg[i]) * inv_t;
  }
  return state;
}

double dual_objective(const StandardLP& lp, const DenseVector& y) {
  ProblemView pb = view_of(lp);
  if (static_cast<Index>(y.size()) != pb.n_rows()) {
    throw std::invalid_argument("dual_objective: y length does not match row count");
  }
  Scratch s(pb);
  return dual_objective_impl(pb, y, s);
}

double normalized_duality_gap(const StandardLP& lp, const DenseVector& x, const DenseVector& y,
                              double r) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("normalized_duality_gap: radius must be positive");
  }
  ProblemView pb = view_of(lp);
  if (static_cast<Index>(x.size()) != pb.n_vars() ||
      static_cast<Index>(y.size()) != pb.n_rows()) {
    throw std::invalid_argument("normalized_duality_gap: dimensions do not match LP");
  }
  Scratch s(pb);
  return gap_impl(pb, x, y, r, s);
}

KktResiduals kkt_residuals(const StandardLP& lp, const DenseVector& x, const DenseVector& y) {
  ProblemView pb = view_of(lp);
  if (static_cast<Index>(x.size()) != pb.n_vars() ||
      static_cast<Index>(y.size()) != pb.n_rows()) {
    throw std::invalid_argument("kkt_residuals: dimensions do not match LP");
  }
  Scratch s(pb);
  return kkt_impl(pb, x, y, s);
}

SolveReport solve(const StandardLP& lp, const SolverConfig& config) {
  lp.validate();
  if (!(config.tolerance > 0.0)) {
    throw std::invalid_argument("solve: tolerance must be positive");
  }
  if (!(config.step_safety > 0.0 && config.step_safety < 1.0)) {
    throw std::invalid_argument("solve: step_safety must lie in (0, 1)");
  }

  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  const Index W = lp.n_vars();
  const Index L = lp.n_rows();

  // Equilibrated problem: G~ = w D_r G D_c, p~ = D_c p, h~ = w D_r h, with
  // the unit box mapped to x~ in [0, 1 / col_scale]. Unscaling is x = D_c x~,
  // y = w D_r y~, which preserves both the solution set and the objective.
  //
  // The uniform row weight w balances the two blocks of the equal-step
  // update: primal coordinates live in the unit box while dual magnitudes
  // grow with the cost scale, so w^2 = 2 / (1 + |p~|_inf) trades a larger
  // primal step against a smaller dual one at the same eta * tau * |G|^2.
  SparseMatrix scaled_matrix = lp.constraints;
  DenseVector scaled_p = lp.objective;
  DenseVector scaled_h = lp.rhs;
  DenseVector scaled_upper;
  RescalingDiagonals diag;
  diag.row_scale.assign(static_cast<std::size_t>(L), 1.0);
  diag.col_scale.assign(static_cast<std::size_t>(W), 1.0);
  bool column_scaled = false;
  if (config.rescale && config.ruiz_iterations > 0) {
    auto [m, d] = ruiz_rescale(lp.constraints, config.ruiz_iterations);
    scaled_matrix = std::move(m);
    diag = std::move(d);
    for (Index w = 0; w < W; ++w) {
      std::size_t i = static_cast<std::size_t>(w);
      scaled_p[i] = lp.objective[i] * diag.col_scale[i];
      if (diag.col_scale[i] != 1.0) column_scaled = true;
    }
    for (Index l = 0; l < L; ++l) {
      std::size_t i = static_cast<std::size_t>(l);
      scaled_h[i] = lp.rhs[i] * diag.row_scale[i];
    }
  }
  const double dual_weight = std::sqrt(2.0 / (1.0 + linf_norm(scaled_p)));
  for (double& v : scaled_matrix.values) v *= dual_weight;
  for (Index l = 0; l < L; ++l) {
    std::size_t i = static_cast<std::size_t>(l);
    scaled_h[i] *= dual_weight;
    diag.row_scale[i] *= dual_weight;
  }
  ProblemView pb;
  pb.matrix = &scaled_matrix;
  pb.objective = &scaled_p;
  pb.rhs = &scaled_h;
  if (column_scaled) {
    scaled_upper.resize(static_cast<std::size_t>(W));
    for (Index w = 0; w < W; ++w) {
      std::size_t i = static_cast<std::size_t>(w);
      scaled_upper[i] = 1.0 / diag.col_scale[i];
    }
    pb.x_upper = &scaled_upper;
  }
  ProblemView original = view_of(lp);

  double gnorm = lp.constraints.nnz() > 0
                     ? spectral_norm_estimate(*pb.matrix, config.power_iterations, config.seed)
                     : 0.0;
  const double eta = gnorm > 0.0 ? config.step_safety / gnorm : config.step_safety;
  const double tau = eta;

  const Index max_inner = config.max_inner > 0 ? config.max_inner : 4 * (W + L);

  Scratch scratch(pb);
  Scratch original_scratch(original);

  DenseVector x(static_cast<std::size_t>(W), 0.0);
  DenseVector y(static_cast<std::size_t>(L), 0.0);
  DenseVector x_avg = x, y_avg = y;
  DenseVector anchor_x = x, anchor_y = y;
  DenseVector xo(static_cast<std::size_t>(W)), yo(static_cast<std::size_t>(L));

  auto unscale_into = [&](const DenseVector& xs, const DenseVector& ys) {
    for (Index w = 0; w < W; ++w) {
      std::size_t i = static_cast<std::size_t>(w);
      xo[i] = xs[i] * diag.col_scale[i];
    }
    for (Index l = 0; l < L; ++l) {
      std::size_t i = static_cast<std::size_t>(l);
      yo[i] = ys[i] * diag.row_scale[i];
    }
  };

  SolveReport report;
  Index total = 0;
  Index outer = 0;
  double prev_anchor_distance = 0.0;

  auto adopt = [&](const DenseVector& xs, const DenseVector& ys, const KktResiduals& k,
                   SolveStatus status) {
    unscale_into(xs, ys);
    report.primal = xo;
    report.dual = yo;
    report.objective = k.primal_objective;
    report.primal_residual = k.primal_residual;
    report.dual_residual = k.dual_residual;
    report.relative_gap = k.relative_gap;
    report.status = status;
    report.iterations = total;
    report.restarts = outer;
    report.wall_seconds = elapsed();
  };

  auto within_tolerance = [&](const KktResiduals& k) {
    return k.primal_residual <= config.tolerance && k.dual_residual <= config.tolerance &&
           k.relative_gap <= config.tolerance;
  };

  bool done = false;
  while (!done && outer < config.max_outer) {
    anchor_x = x;
    anchor_y = y;
    double anchor_norm = std::max(linf_norm(anchor_x), linf_norm(anchor_y));
    double r_ref = outer == 0 ? std::max(1.0, anchor_norm) : prev_anchor_distance;
    if (!(r_ref > 0.0)) r_ref = std::max(1.0, anchor_norm);
    double rho_ref = gap_impl(pb, anchor_x, anchor_y, r_ref, scratch);
    report.per_restart_gap.push_back(rho_ref);

    if (outer == 0) {
      unscale_into(x, y);
      KktResiduals k = kkt_impl(original, xo, yo, original_scratch);
      report.trace.push_back({total, outer, 0, k.primal_residual, k.dual_residual, k.relative_gap,
                              rho_ref, k.primal_objective, k.dual_objective, elapsed()});
      if (within_tolerance(k)) {
        adopt(x, y, k, SolveStatus::optimal);
        done = true;
        break;
      }
    }

    Index t = 0;
    Index next_eval = 1;
    std::fill(x_avg.begin(), x_avg.end(), 0.0);
    std::fill(y_avg.begin(), y_avg.end(), 0.0);

    while (true) {
      if (!step_in_place(pb, x, y, eta, tau, scratch)) {
        unscale_into(x, y);
        KktResiduals k = kkt_impl(original, xo, yo, original_scratch);
        adopt(x, y, k, SolveStatus::numerical_failure);
        done = true;
        break;
      }
      ++t;
      ++total;
      double inv_t = 1.0 / static_cast<double>(t);
      for (std::size_t i = 0; i < x.size(); ++i) x_avg[i] += (x[i] - x_avg[i]) * inv_t;
      for (std::size_t i = 0; i < y.size(); ++i) y_avg[i] += (y[i] - y_avg[i]) * inv_t;

      bool out_of_budget = total >= config.max_total_iterations;
      if (t == next_eval || t >= max_inner || out_of_budget) {
        next_eval = t + std::max<Index>(1, t / 8);

        double r_bar = std::max(linf_distance(x_avg, anchor_x), linf_distance(y_avg, anchor_y));
        double rho_bar = r_bar > 0.0 ? gap_impl(pb, x_avg, y_avg, r_bar, scratch)
                                     : std::numeric_limits<double>::quiet_NaN();

        unscale_into(x_avg, y_avg);
        KktResiduals k = kkt_impl(original, xo, yo, original_scratch);
        report.trace.push_back({total, outer, t, k.primal_residual, k.dual_residual,
                                k.relative_gap, rho_bar, k.primal_objective, k.dual_objective,
                                elapsed()});

        if (within_tolerance(k)) {
          adopt(x_avg, y_avg, k, SolveStatus::optimal);
          done = true;
          break;
        }
        if (out_of_budget) {
          adopt(x_avg, y_avg, k, SolveStatus::iteration_limit);
          done = true;
          break;
        }

        if (config.enable_restarts) {
          bool gap_fired = r_bar > 0.0 && std::isfinite(rho_bar) && rho_bar <= 0.5 * rho_ref;
          if (gap_fired || t >= max_inner) {
            report.gap_triggered.push_back(gap_fired);
            prev_anchor_distance = r_bar;
            x = x_avg;
            y = y_avg;
            ++outer;
            break;
          }
        }
      }
    }
  }

  if (!done) {
    // outer-loop budget exhausted; report the current averaged candidate
    unscale_into(x_avg, y_avg);
    KktResiduals k = kkt_impl(original, xo, yo, original_scratch);
    adopt(x_avg, y_avg, k, SolveStatus::iteration_limit);
  }
  return report;
}

}  // namespace marchetype
