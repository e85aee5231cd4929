#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace marchetype {

using Index = std::int64_t;

// Dense vectors are plain std::vector<double>. Public entry points reject
// NaN/Inf; hot loops assume finite data.
using DenseVector = std::vector<double>;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Compressed sparse row storage.
// Invariants: row_offsets has n_rows+1 nondecreasing entries ending at nnz;
// column indices strictly increase within a row; no explicit zeros are stored.
// Immutable after construction and safe to share across threads.
struct SparseMatrix {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Index> row_offsets{0};
  std::vector<Index> col_indices;
  std::vector<double> values;

  Index nnz() const { return static_cast<Index>(values.size()); }
};

// Builds CSR from (row, col, value) triplets. Duplicates are summed, entries
// that sum to zero are dropped. Throws std::invalid_argument naming the
// offending triplet on an out-of-range index or a non-finite value.
SparseMatrix csr_from_triplets(Index n_rows, Index n_cols, std::vector<Triplet> triplets);

SparseMatrix identity_matrix(Index n);

// y = A x. Cost proportional to nnz.
DenseVector spmv(const SparseMatrix& a, const DenseVector& x);
void spmv_into(const SparseMatrix& a, const double* x, double* y);

// x = A^T y, computed by scattering over the CSR rows (no transposed copy).
DenseVector spmv_transpose(const SparseMatrix& a, const DenseVector& y);
void spmv_transpose_into(const SparseMatrix& a, const double* y, double* x);

// Power-iteration estimate of the largest singular value, deterministic for a
// fixed seed. The estimate may sit slightly below the true norm; callers that
// need an upper bound apply their own safety factor. All-zero matrix gives 0.
double spectral_norm_estimate(const SparseMatrix& a, int iterations, std::uint64_t seed);

// Diagonal row/column multipliers, strictly positive.
struct RescalingDiagonals {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
};

// Iterated l-inf equilibration. Returns (D_r A D_c, diagonals) where the
// diagonals hold the accumulated multipliers. iterations == 0 returns the
// input unchanged with unit scales; empty rows and columns keep scale 1.
// After about 10 iterations every nonempty row and column of the scaled
// matrix has max-abs entry in [1/2, 2].
std::pair<SparseMatrix, RescalingDiagonals> ruiz_rescale(const SparseMatrix& a, int iterations);

// Small dense helpers shared across the solver and the compilers.
double dot(const DenseVector& a, const DenseVector& b);
double linf_norm(const DenseVector& v);
double linf_distance(const DenseVector& a, const DenseVector& b);
bool all_finite(const DenseVector& v);
void require_finite(const DenseVector& v, const char* what);

}  // namespace marchetype
