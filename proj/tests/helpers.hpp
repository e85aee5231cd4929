#pragma once

// Shared test utilities: deterministic random instances and matrices, dense
// reference kernels, and a Jacobi eigensolver used as the spectral oracle.
// Everything here is test-only and independent of the library's own kernels.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "marchetype/datagen.hpp"
#include "marchetype/sparse.hpp"
#include "marchetype/targeting.hpp"

namespace testutil {

using marchetype::DenseVector;
using marchetype::Index;
using marchetype::SparseMatrix;
using marchetype::Triplet;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline SparseMatrix random_sparse(Index n_rows, Index n_cols, Index n_triplets,
                                  std::uint64_t seed) {
  auto g = rng(seed);
  std::uniform_int_distribution<Index> row(0, n_rows - 1), col(0, n_cols - 1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<Triplet> t;
  for (Index k = 0; k < n_triplets; ++k) t.push_back({row(g), col(g), val(g)});
  return marchetype::csr_from_triplets(n_rows, n_cols, std::move(t));
}

inline DenseVector random_vector(Index n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  auto g = rng(seed);
  std::uniform_real_distribution<double> val(lo, hi);
  DenseVector v(static_cast<std::size_t>(n));
  for (double& x : v) x = val(g);
  return v;
}

// Dense row-major copy of a sparse matrix.
inline DenseVector densify_matrix(const SparseMatrix& a) {
  DenseVector d(static_cast<std::size_t>(a.n_rows * a.n_cols), 0.0);
  for (Index r = 0; r < a.n_rows; ++r) {
    for (Index k = a.row_offsets[static_cast<std::size_t>(r)];
         k < a.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      d[static_cast<std::size_t>(r * a.n_cols + a.col_indices[static_cast<std::size_t>(k)])] =
          a.values[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

// Triple-loop reference multiply.
inline DenseVector dense_spmv(const SparseMatrix& a, const DenseVector& x) {
  DenseVector dense = densify_matrix(a);
  DenseVector y(static_cast<std::size_t>(a.n_rows), 0.0);
  for (Index r = 0; r < a.n_rows; ++r) {
    for (Index c = 0; c < a.n_cols; ++c) {
      y[static_cast<std::size_t>(r)] +=
          dense[static_cast<std::size_t>(r * a.n_cols + c)] * x[static_cast<std::size_t>(c)];
    }
  }
  return y;
}

inline DenseVector dense_spmv_transpose(const SparseMatrix& a, const DenseVector& y) {
  DenseVector dense = densify_matrix(a);
  DenseVector x(static_cast<std::size_t>(a.n_cols), 0.0);
  for (Index r = 0; r < a.n_rows; ++r) {
    for (Index c = 0; c < a.n_cols; ++c) {
      x[static_cast<std::size_t>(c)] +=
          dense[static_cast<std::size_t>(r * a.n_cols + c)] * y[static_cast<std::size_t>(r)];
    }
  }
  return x;
}

// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations; used
// as an independent oracle for the largest singular value via A^T A.
inline double jacobi_largest_eigenvalue(DenseVector s, Index n) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        off += std::abs(s[static_cast<std::size_t>(p * n + q)]);
      }
    }
    if (off < 1e-14) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        double apq = s[static_cast<std::size_t>(p * n + q)];
        if (std::abs(apq) < 1e-16) continue;
        double app = s[static_cast<std::size_t>(p * n + p)];
        double aqq = s[static_cast<std::size_t>(q * n + q)];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double snv = t * c;
        for (Index k = 0; k < n; ++k) {
          double skp = s[static_cast<std::size_t>(k * n + p)];
          double skq = s[static_cast<std::size_t>(k * n + q)];
          s[static_cast<std::size_t>(k * n + p)] = c * skp - snv * skq;
          s[static_cast<std::size_t>(k * n + q)] = snv * skp + c * skq;
        }
        for (Index k = 0; k < n; ++k) {
          double spk = s[static_cast<std::size_t>(p * n + k)];
          double sqk = s[static_cast<std::size_t>(q * n + k)];
          s[static_cast<std::size_t>(p * n + k)] = c * spk - snv * sqk;
          s[static_cast<std::size_t>(q * n + k)] = snv * spk + c * sqk;
        }
      }
    }
  }
  double best = 0.0;
  for (Index i = 0; i < n; ++i) {
    best = std::max(best, s[static_cast<std::size_t>(i * n + i)]);
  }
  return best;
}

inline double spectral_norm_oracle(const SparseMatrix& a) {
  DenseVector dense = densify_matrix(a);
  Index n = a.n_cols;
  DenseVector ata(static_cast<std::size_t>(n * n), 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Index r = 0; r < a.n_rows; ++r) {
        s += dense[static_cast<std::size_t>(r * n + i)] * dense[static_cast<std::size_t>(r * n + j)];
      }
      ata[static_cast<std::size_t>(i * n + j)] = s;
    }
  }
  return std::sqrt(std::max(0.0, jacobi_largest_eigenvalue(std::move(ata), n)));
}

// Random targeting instance with the hierarchical default menu, scaled down.
struct SmallCase {
  marchetype::TargetingInstance instance;
  marchetype::SegmentHierarchy hierarchy;
  marchetype::ConstraintMenu menu;
};

inline SmallCase random_small_case(std::uint64_t seed, Index max_customers = 50,
                                   Index max_actions = 3) {
  auto g = rng(seed);
  marchetype::GenConfig cfg;
  cfg.n_actions = 1 + static_cast<Index>(g() % static_cast<std::uint64_t>(max_actions));
  cfg.zip_depth = 3 + static_cast<int>(g() % 3);
  switch (g() % 3) {
    case 0: cfg.branching = {1 + static_cast<Index>(g() % 5)}; break;
    case 1: cfg.branching = {2, 1 + static_cast<Index>(g() % 2)}; break;
    default: cfg.branching = {1 + static_cast<Index>(g() % 2), 2}; break;
  }
  Index leaves = 1;
  for (Index b : cfg.branching) leaves *= b;
  cfg.n_customers = std::max<Index>(leaves * 3, 10 + static_cast<Index>(g() % static_cast<std::uint64_t>(
                                                          std::max<Index>(1, max_customers - 9))));
  cfg.n_customers = std::min(cfg.n_customers, max_customers);
  if (cfg.n_customers < leaves) cfg.n_customers = leaves;
  cfg.seed = seed * 977 + 13;
  SmallCase c;
  c.instance = marchetype::generate_instance(cfg);
  c.hierarchy = marchetype::make_hierarchy(cfg);
  c.menu = marchetype::default_constraint_menu(c.instance, c.hierarchy);
  return c;
}

}  // namespace testutil
