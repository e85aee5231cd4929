#include "marchetype/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marchetype {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-11;

// Bounded-variable simplex over the equality system [A | I | -I_art] x = b.
// Keeps an explicit basis inverse, refactorized periodically for stability.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const DenseLP& lp)
      : lp_(lp), n_rows_(lp.n_rows), n_struct_(lp.n_cols) {
    for (Index i = 0; i < n_rows_; ++i) {
      if (lp_.b[static_cast<std::size_t>(i)] < 0.0) art_rows_.push_back(i);
    }
    n_total_ = n_struct_ + n_rows_ + static_cast<Index>(art_rows_.size());

    lower_.assign(static_cast<std::size_t>(n_total_), 0.0);
    upper_.assign(static_cast<std::size_t>(n_total_), kInf);
    for (Index j = 0; j < n_struct_; ++j) upper_[static_cast<std::size_t>(j)] = 1.0;

    value_.assign(static_cast<std::size_t>(n_total_), 0.0);
    is_basic_.assign(static_cast<std::size_t>(n_total_), false);
    at_upper_.assign(static_cast<std::size_t>(n_total_), false);
    basis_.resize(static_cast<std::size_t>(n_rows_));

    Index art = 0;
    for (Index i = 0; i < n_rows_; ++i) {
      bool negative = lp_.b[static_cast<std::size_t>(i)] < 0.0;
      Index var = negative ? n_struct_ + n_rows_ + art : n_struct_ + i;
      if (negative) ++art;
      basis_[static_cast<std::size_t>(i)] = var;
      is_basic_[static_cast<std::size_t>(var)] = true;
      value_[static_cast<std::size_t>(var)] = std::abs(lp_.b[static_cast<std::size_t>(i)]);
    }

    // B holds e_i for slack rows and -e_i for artificial rows.
    binv_.assign(static_cast<std::size_t>(n_rows_ * n_rows_), 0.0);
    for (Index i = 0; i < n_rows_; ++i) {
      bool artificial = basis_[static_cast<std::size_t>(i)] >= n_struct_ + n_rows_;
      binv_[static_cast<std::size_t>(i * n_rows_ + i)] = artificial ? -1.0 : 1.0;
    }
  }

  SimplexResult run() {
    if (!art_rows_.empty()) {
      DenseVector phase1(static_cast<std::size_t>(n_total_), 0.0);
      for (std::size_t a = 0; a < art_rows_.size(); ++a) {
        phase1[static_cast<std::size_t>(n_struct_ + n_rows_) + a] = 1.0;
      }
      optimize(phase1);
      double infeasibility = 0.0;
      for (std::size_t a = 0; a < art_rows_.size(); ++a) {
        infeasibility += value_[static_cast<std::size_t>(n_struct_ + n_rows_) + a];
      }
      if (infeasibility > 1e-7) {
        SimplexResult r;
        r.status = OracleStatus::infeasible;
        r.pivots = pivots_;
        return r;
      }
      retire_artificials();
    }

    DenseVector phase2(static_cast<std::size_t>(n_total_), 0.0);
    for (Index j = 0; j < n_struct_; ++j) {
      phase2[static_cast<std::size_t>(j)] = lp_.objective[static_cast<std::size_t>(j)];
    }
    optimize(phase2);

    SimplexResult r;
    r.status = OracleStatus::optimal;
    r.x.resize(static_cast<std::size_t>(n_struct_));
    r.objective = 0.0;
    for (Index j = 0; j < n_struct_; ++j) {
      double v = std::clamp(value_[static_cast<std::size_t>(j)], 0.0, 1.0);
      r.x[static_cast<std::size_t>(j)] = v;
      r.objective += lp_.objective[static_cast<std::size_t>(j)] * v;
    }
    r.pivots = pivots_;
    return r;
  }

 private:
  double column_entry(Index var, Index row) const {
    if (var < n_struct_) return lp_.at(row, var);
    if (var < n_struct_ + n_rows_) return var - n_struct_ == row ? 1.0 : 0.0;
    return art_rows_[static_cast<std::size_t>(var - n_struct_ - n_rows_)] == row ? -1.0 : 0.0;
  }

  // u = B^{-1} A_var
  void ftran(Index var, DenseVector& u) const {
    if (var < n_struct_) {
      for (Index i = 0; i < n_rows_; ++i) {
        double s = 0.0;
        for (Index k = 0; k < n_rows_; ++k) {
          double a = lp_.at(k, var);
          if (a != 0.0) s += binv_[static_cast<std::size_t>(i * n_rows_ + k)] * a;
        }
        u[static_cast<std::size_t>(i)] = s;
      }
    } else {
      Index row;
      double sign;
      if (var < n_struct_ + n_rows_) {
        row = var - n_struct_;
        sign = 1.0;
      } else {
        row = art_rows_[static_cast<std::size_t>(var - n_struct_ - n_rows_)];
        sign = -1.0;
      }
      for (Index i = 0; i < n_rows_; ++i) {
        u[static_cast<std::size_t>(i)] = sign * binv_[static_cast<std::size_t>(i * n_rows_ + row)];
      }
    }
  }

  void optimize(const DenseVector& cost) {
    DenseVector pi(static_cast<std::size_t>(n_rows_));
    DenseVector u(static_cast<std::size_t>(n_rows_));
    Index since_refactor = 0;

    while (true) {
      // pi = c_B B^{-1}
      for (Index j = 0; j < n_rows_; ++j) {
        double s = 0.0;
        for (Index i = 0; i < n_rows_; ++i) {
          double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
          if (cb != 0.0) s += cb * binv_[static_cast<std::size_t>(i * n_rows_ + j)];
        }
        pi[static_cast<std::size_t>(j)] = s;
      }

      // Bland: smallest-index eligible entering variable.
      Index entering = -1;
      double direction = 1.0;
      for (Index j = 0; j < n_total_; ++j) {
        std::size_t sj = static_cast<std::size_t>(j);
        if (is_basic_[sj] || lower_[sj] == upper_[sj]) continue;
        double d = cost[sj];
        if (j < n_struct_) {
          for (Index i = 0; i < n_rows_; ++i) {
            double a = lp_.at(i, j);
            if (a != 0.0) d -= pi[static_cast<std::size_t>(i)] * a;
          }
        } else if (j < n_struct_ + n_rows_) {
          d -= pi[static_cast<std::size_t>(j - n_struct_)];
        } else {
          d += pi[static_cast<std::size_t>(art_rows_[static_cast<std::size_t>(j - n_struct_ - n_rows_)])];
        }
        if (!at_upper_[sj] && d < -kDualTol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (at_upper_[sj] && d > kDualTol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return;

      ftran(entering, u);

      // Ratio test; dx_B/dt = -direction * u.
      double range = upper_[static_cast<std::size_t>(entering)] -
                     lower_[static_cast<std::size_t>(entering)];
      double t_max = range;
      Index leaving_row = -1;
      bool leaving_to_upper = false;
      for (Index i = 0; i < n_rows_; ++i) {
        double g = -direction * u[static_cast<std::size_t>(i)];
        if (std::abs(g) <= kPivotTol) continue;
        Index k = basis_[static_cast<std::size_t>(i)];
        double v = value_[static_cast<std::size_t>(k)];
        double t;
        bool to_upper;
        if (g > 0.0) {
          double cap = upper_[static_cast<std::size_t>(k)];
          if (cap == kInf) continue;
          t = (cap - v) / g;
          to_upper = true;
        } else {
          t = (v - lower_[static_cast<std::size_t>(k)]) / (-g);
          to_upper = false;
        }
        if (t < -1e-12) t = 0.0;
        // Bland tie-break: smallest basic variable index among minimal ratios.
        if (t < t_max - 1e-12 ||
            (t < t_max + 1e-12 && leaving_row >= 0 &&
             k < basis_[static_cast<std::size_t>(leaving_row)])) {
          t_max = t;
          leaving_row = i;
          leaving_to_upper = to_upper;
        }
      }

      if (t_max == kInf) {
        throw std::runtime_error("simplex: unbounded direction, problem is malformed");
      }

      std::size_t se = static_cast<std::size_t>(entering);
      if (leaving_row < 0) {
        // Bound flip, no basis change.
        for (Index i = 0; i < n_rows_; ++i) {
          Index k = basis_[static_cast<std::size_t>(i)];
          value_[static_cast<std::size_t>(k)] -= direction * t_max * u[static_cast<std::size_t>(i)];
        }
        at_upper_[se] = !at_upper_[se];
        value_[se] = at_upper_[se] ? upper_[se] : lower_[se];
        continue;
      }

      double pivot = u[static_cast<std::size_t>(leaving_row)];
      if (std::abs(pivot) < kPivotTol) {
        throw std::runtime_error("simplex: pivot " + std::to_string(pivot) + " below 1e-11 in row " +
                                 std::to_string(leaving_row) + " for entering variable " +
                                 std::to_string(entering));
      }

      for (Index i = 0; i < n_rows_; ++i) {
        Index k = basis_[static_cast<std::size_t>(i)];
        value_[static_cast<std::size_t>(k)] -= direction * t_max * u[static_cast<std::size_t>(i)];
      }
      value_[se] = (at_upper_[se] ? upper_[se] : lower_[se]) + direction * t_max;

      Index leaving = basis_[static_cast<std::size_t>(leaving_row)];
      std::size_t sl = static_cast<std::size_t>(leaving);
      is_basic_[sl] = false;
      at_upper_[sl] = leaving_to_upper;
      value_[sl] = leaving_to_upper ? upper_[sl] : lower_[sl];

      basis_[static_cast<std::size_t>(leaving_row)] = entering;
      is_basic_[se] = true;

      // Elementary update of the basis inverse.
      double inv_pivot = 1.0 / pivot;
      for (Index j = 0; j < n_rows_; ++j) {
        binv_[static_cast<std::size_t>(leaving_row * n_rows_ + j)] *= inv_pivot;
      }
      for (Index i = 0; i < n_rows_; ++i) {
        if (i == leaving_row) continue;
        double f = u[static_cast<std::size_t>(i)];
        if (f == 0.0) continue;
        for (Index j = 0; j < n_rows_; ++j) {
          binv_[static_cast<std::size_t>(i * n_rows_ + j)] -=
              f * binv_[static_cast<std::size_t>(leaving_row * n_rows_ + j)];
        }
      }

      ++pivots_;
      if (++since_refactor >= 128) {
        refactorize();
        since_refactor = 0;
      }
    }
  }

  // Rebuild B^{-1} by Gauss-Jordan with partial pivoting and recompute the
  // basic values from the nonbasic bounds.
  void refactorize() {
    std::size_t n = static_cast<std::size_t>(n_rows_);
    DenseVector work(n * 2 * n, 0.0);
    for (Index i = 0; i < n_rows_; ++i) {
      for (Index r = 0; r < n_rows_; ++r) {
        work[static_cast<std::size_t>(r) * 2 * n + static_cast<std::size_t>(i)] =
            column_entry(basis_[static_cast<std::size_t>(i)], r);
      }
      work[static_cast<std::size_t>(i) * 2 * n + n + static_cast<std::size_t>(i)] = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(work[r * 2 * n + col]) > std::abs(work[best * 2 * n + col])) best = r;
      }
      if (std::abs(work[best * 2 * n + col]) < kPivotTol) {
        throw std::runtime_error("simplex: singular basis during refactorization");
      }
      if (best != col) {
        for (std::size_t j = 0; j < 2 * n; ++j) std::swap(work[best * 2 * n + j], work[col * 2 * n + j]);
      }
      double inv = 1.0 / work[col * 2 * n + col];
      for (std::size_t j = 0; j < 2 * n; ++j) work[col * 2 * n + j] *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        double f = work[r * 2 * n + col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < 2 * n; ++j) work[r * 2 * n + j] -= f * work[col * 2 * n + j];
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < n; ++j) {
        binv_[r * n + j] = work[r * 2 * n + n + j];
      }
    }
    recompute_basic_values();
  }

  void recompute_basic_values() {
    DenseVector rhs(static_cast<std::size_t>(n_rows_));
    for (Index i = 0; i < n_rows_; ++i) rhs[static_cast<std::size_t>(i)] = lp_.b[static_cast<std::size_t>(i)];
    for (Index j = 0; j < n_total_; ++j) {
      std::size_t sj = static_cast<std::size_t>(j);
      if (is_basic_[sj] || value_[sj] == 0.0) continue;
      for (Index i = 0; i < n_rows_; ++i) {
        double a = column_entry(j, i);
        if (a != 0.0) rhs[static_cast<std::size_t>(i)] -= a * value_[sj];
      }
    }
    for (Index i = 0; i < n_rows_; ++i) {
      double s = 0.0;
      for (Index k = 0; k < n_rows_; ++k) {
        s += binv_[static_cast<std::size_t>(i * n_rows_ + k)] * rhs[static_cast<std::size_t>(k)];
      }
      value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = s;
    }
  }

  // After phase 1, pivot basic artificials out where possible; a row whose
  // non-artificial entries are all zero is redundant and keeps its artificial
  // fixed at zero.
  void retire_artificials() {
    DenseVector u(static_cast<std::size_t>(n_rows_));
    for (Index i = 0; i < n_rows_; ++i) {
      Index var = basis_[static_cast<std::size_t>(i)];
      if (var < n_struct_ + n_rows_) continue;
      Index replacement = -1;
      for (Index j = 0; j < n_struct_ + n_rows_ && replacement < 0; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)]) continue;
        ftran(j, u);
        if (std::abs(u[static_cast<std::size_t>(i)]) > 1e-8) replacement = j;
      }
      if (replacement >= 0) {
        ftran(replacement, u);
        double pivot = u[static_cast<std::size_t>(i)];
        std::size_t se = static_cast<std::size_t>(replacement);
        basis_[static_cast<std::size_t>(i)] = replacement;
        is_basic_[se] = true;
        is_basic_[static_cast<std::size_t>(var)] = false;
        value_[se] = value_[static_cast<std::size_t>(var)];  // zero, degenerate swap
        double inv_pivot = 1.0 / pivot;
        for (Index j = 0; j < n_rows_; ++j) {
          binv_[static_cast<std::size_t>(i * n_rows_ + j)] *= inv_pivot;
        }
        for (Index r = 0; r < n_rows_; ++r) {
          if (r == i) continue;
          double f = u[static_cast<std::size_t>(r)];
          if (f == 0.0) continue;
          for (Index j = 0; j < n_rows_; ++j) {
            binv_[static_cast<std::size_t>(r * n_rows_ + j)] -=
                f * binv_[static_cast<std::size_t>(i * n_rows_ + j)];
          }
        }
      }
      std::size_t sv = static_cast<std::size_t>(var);
      upper_[sv] = 0.0;
      value_[sv] = 0.0;
      at_upper_[sv] = false;
    }
    // Fix every artificial so none can re-enter.
    for (Index a = 0; a < static_cast<Index>(art_rows_.size()); ++a) {
      upper_[static_cast<std::size_t>(n_struct_ + n_rows_ + a)] = 0.0;
    }
    refactorize();
  }

  const DenseLP& lp_;
  Index n_rows_;
  Index n_struct_;
  Index n_total_ = 0;
  std::vector<Index> art_rows_;
  std::vector<Index> basis_;
  DenseVector binv_;
  DenseVector lower_, upper_, value_;
  std::vector<bool> is_basic_, at_upper_;
  Index pivots_ = 0;
};

}  // namespace

DenseLP densify(const StandardLP& lp) {
  lp.validate();
  const Index W = lp.n_vars();
  const Index L = lp.n_rows();
  if (W * L > 10000000) {
    throw std::invalid_argument("densify: n_rows * n_cols exceeds the 1e7 guard");
  }
  DenseLP d;
  d.n_rows = L;
  d.n_cols = W;
  d.objective = lp.objective;
  d.b = lp.rhs;
  d.a.assign(static_cast<std::size_t>(L * W), 0.0);
  for (Index r = 0; r < L; ++r) {
    for (Index k = lp.constraints.row_offsets[static_cast<std::size_t>(r)];
         k < lp.constraints.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      d.a[static_cast<std::size_t>(r * W + lp.constraints.col_indices[static_cast<std::size_t>(k)])] =
          lp.constraints.values[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

SimplexResult simplex_solve(const DenseLP& lp) {
  if (static_cast<Index>(lp.objective.size()) != lp.n_cols ||
      static_cast<Index>(lp.b.size()) != lp.n_rows ||
      static_cast<Index>(lp.a.size()) != lp.n_rows * lp.n_cols) {
    throw std::invalid_argument("simplex_solve: inconsistent dimensions");
  }
  require_finite(lp.objective, "oracle objective");
  require_finite(lp.b, "oracle rhs");
  BoundedSimplex solver(lp);
  return solver.run();
}

VertexResult vertex_enumerate(const DenseLP& lp) {
  const Index W = lp.n_cols;
  const Index L = lp.n_rows;
  if (W > 10) {
    throw std::invalid_argument("vertex_enumerate: limited to 10 variables");
  }

  VertexResult best;
  best.objective = kInf;

  DenseVector x(static_cast<std::size_t>(W));
  std::vector<Index> rows, cols;

  auto consider = [&](const DenseVector& cand) {
    for (Index j = 0; j < W; ++j) {
      double v = cand[static_cast<std::size_t>(j)];
      if (v < -kFeasTol || v > 1.0 + kFeasTol) return;
    }
    for (Index r = 0; r < L; ++r) {
      double s = 0.0;
      for (Index j = 0; j < W; ++j) s += lp.at(r, j) * cand[static_cast<std::size_t>(j)];
      if (s > lp.b[static_cast<std::size_t>(r)] + kFeasTol) return;
    }
    double obj = 0.0;
    for (Index j = 0; j < W; ++j) {
      obj += lp.objective[static_cast<std::size_t>(j)] * cand[static_cast<std::size_t>(j)];
    }
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.x = cand;
      for (double& v : best.x) v = std::clamp(v, 0.0, 1.0);
    }
  };

  // Solve A[rows][cols] x_cols = b[rows] - A[rows][fixed] x_fixed for each
  // active-row subset, free-column subset and bound pattern on the rest.
  auto solve_subsystem = [&](const std::vector<Index>& r_set, const std::vector<Index>& c_set) {
    std::size_t m = r_set.size();
    Index n_fixed = W - static_cast<Index>(m);
    std::vector<Index> fixed;
    for (Index j = 0; j < W; ++j) {
      if (std::find(c_set.begin(), c_set.end(), j) == c_set.end()) fixed.push_back(j);
    }
    for (Index mask = 0; mask < (Index{1} << n_fixed); ++mask) {
      for (std::size_t f = 0; f < fixed.size(); ++f) {
        x[static_cast<std::size_t>(fixed[f])] = (mask >> f) & 1 ? 1.0 : 0.0;
      }
      if (m == 0) {
        consider(x);
        continue;
      }
      DenseVector mat(m * m);
      DenseVector rhs(m);
      for (std::size_t ri = 0; ri < m; ++ri) {
        double r = lp.b[static_cast<std::size_t>(r_set[ri])];
        for (Index f : fixed) r -= lp.at(r_set[ri], f) * x[static_cast<std::size_t>(f)];
        rhs[ri] = r;
        for (std::size_t ci = 0; ci < m; ++ci) {
          mat[ri * m + ci] = lp.at(r_set[ri], c_set[ci]);
        }
      }
      // Gaussian elimination with partial pivoting; singular systems skipped.
      bool singular = false;
      for (std::size_t col = 0; col < m && !singular; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r) {
          if (std::abs(mat[r * m + col]) > std::abs(mat[piv * m + col])) piv = r;
        }
        if (std::abs(mat[piv * m + col]) < 1e-10) {
          singular = true;
          break;
        }
        if (piv != col) {
          for (std::size_t j = 0; j < m; ++j) std::swap(mat[piv * m + j], mat[col * m + j]);
          std::swap(rhs[piv], rhs[col]);
        }
        for (std::size_t r = col + 1; r < m; ++r) {
          double f = mat[r * m + col] / mat[col * m + col];
          if (f == 0.0) continue;
          for (std::size_t j = col; j < m; ++j) mat[r * m + j] -= f * mat[col * m + j];
          rhs[r] -= f * rhs[col];
        }
      }
      if (singular) continue;
      for (std::size_t r = m; r-- > 0;) {
        double s = rhs[r];
        for (std::size_t j = r + 1; j < m; ++j) s -= mat[r * m + j] * rhs[j];
        rhs[r] = s / mat[r * m + r];
      }
      for (std::size_t ci = 0; ci < m; ++ci) x[static_cast<std::size_t>(c_set[ci])] = rhs[ci];
      consider(x);
    }
  };

  std::vector<Index> r_set, c_set;
  auto for_each_combination = [](Index n, Index k, auto&& visit) {
    std::vector<Index> idx(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      visit(idx);
      Index i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  };

  Index max_active = std::min(W, L);
  for (Index m = 0; m <= max_active; ++m) {
    if (m == 0) {
      solve_subsystem({}, {});
      continue;
    }
    for_each_combination(L, m, [&](const std::vector<Index>& rows_idx) {
      for_each_combination(W, m, [&](const std::vector<Index>& cols_idx) {
        solve_subsystem(rows_idx, cols_idx);
      });
    });
  }
  return best;
}

}  // namespace marchetype
