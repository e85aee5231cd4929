#pragma once

#include <string>
#include <vector>

#include "marchetype/sparse.hpp"
#include "marchetype/targeting.hpp"

namespace marchetype {

// Dense copy of a standard-form LP, for exact small-scale cross-checks.
// Intended for at most a few hundred columns and a few thousand rows.
struct DenseLP {
  DenseVector objective;  // length W
  DenseVector a;          // L x W, row-major
  DenseVector b;          // length L
  Index n_rows = 0;
  Index n_cols = 0;

  double at(Index row, Index col) const {
    return a[static_cast<std::size_t>(row * n_cols + col)];
  }
};

// Exact densification; throws when n_rows * n_cols exceeds 1e7.
DenseLP densify(const StandardLP& lp);

enum class OracleStatus { optimal, infeasible };

struct SimplexResult {
  OracleStatus status = OracleStatus::optimal;
  DenseVector x;
  double objective = 0.0;
  Index pivots = 0;
};

// Bounded-variable primal simplex with Bland's rule (finite termination) on
//   min c.x  s.t.  A x <= b,  0 <= x <= 1.
// Phase 1 uses artificial variables for rows with negative slack. Throws
// std::runtime_error with diagnostics on a pivot below 1e-11.
SimplexResult simplex_solve(const DenseLP& lp);

struct VertexResult {
  bool feasible = false;
  DenseVector x;
  double objective = 0.0;
};

// Brute-force second oracle for n_cols <= 10: enumerates candidate points
// from all active-set combinations of rows and bound facets, keeps the
// feasible ones and returns the minimizer.
VertexResult vertex_enumerate(const DenseLP& lp);

}  // namespace marchetype
