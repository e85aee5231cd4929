#include "marchetype/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace marchetype {

namespace {

std::string triplet_text(std::size_t pos, const Triplet& t) {
  return "triplet " + std::to_string(pos) + " (" + std::to_string(t.row) + ", " +
         std::to_string(t.col) + ", " + std::to_string(t.value) + ")";
}

}  // namespace

SparseMatrix csr_from_triplets(Index n_rows, Index n_cols, std::vector<Triplet> triplets) {
  if (n_rows < 0 || n_cols < 0) {
    throw std::invalid_argument("csr_from_triplets: negative dimension");
  }
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const Triplet& t = triplets[i];
    if (t.row < 0 || t.row >= n_rows) {
      throw std::invalid_argument("csr_from_triplets: " + triplet_text(i, t) +
                                  ": row index out of range [0, " + std::to_string(n_rows) + ")");
    }
    if (t.col < 0 || t.col >= n_cols) {
      throw std::invalid_argument("csr_from_triplets: " + triplet_text(i, t) +
                                  ": column index out of range [0, " + std::to_string(n_cols) + ")");
    }
    if (!std::isfinite(t.value)) {
      throw std::invalid_argument("csr_from_triplets: " + triplet_text(i, t) +
                                  ": non-finite value");
    }
  }

  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_offsets.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  m.col_indices.reserve(triplets.size());
  m.values.reserve(triplets.size());

  std::size_t i = 0;
  for (Index row = 0; row < n_rows; ++row) {
    while (i < triplets.size() && triplets[i].row == row) {
      Index col = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == row && triplets[i].col == col) {
        sum += triplets[i].value;
        ++i;
      }
      if (sum != 0.0) {
        m.col_indices.push_back(col);
        m.values.push_back(sum);
      }
    }
    m.row_offsets[static_cast<std::size_t>(row) + 1] = static_cast<Index>(m.values.size());
  }
  return m;
}

SparseMatrix identity_matrix(Index n) {
  SparseMatrix m;
  m.n_rows = n;
  m.n_cols = n;
  m.row_offsets.resize(static_cast<std::size_t>(n) + 1);
  m.col_indices.resize(static_cast<std::size_t>(n));
  m.values.assign(static_cast<std::size_t>(n), 1.0);
  for (Index i = 0; i <= n; ++i) m.row_offsets[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < n; ++i) m.col_indices[static_cast<std::size_t>(i)] = i;
  return m;
}

void spmv_into(const SparseMatrix& a, const double* x, double* y) {
  const Index* offs = a.row_offsets.data();
  const Index* cols = a.col_indices.data();
  const double* vals = a.values.data();
  for (Index r = 0; r < a.n_rows; ++r) {
    double sum = 0.0;
    for (Index k = offs[r]; k < offs[r + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    y[r] = sum;
  }
}

DenseVector spmv(const SparseMatrix& a, const DenseVector& x) {
  if (static_cast<Index>(x.size()) != a.n_cols) {
    throw std::invalid_argument("spmv: vector length " + std::to_string(x.size()) +
                                " does not match n_cols " + std::to_string(a.n_cols));
  }
  DenseVector y(static_cast<std::size_t>(a.n_rows));
  spmv_into(a, x.data(), y.data());
  return y;
}

void spmv_transpose_into(const SparseMatrix& a, const double* y, double* x) {
  std::fill(x, x + a.n_cols, 0.0);
  const Index* offs = a.row_offsets.data();
  const Index* cols = a.col_indices.data();
  const double* vals = a.values.data();
  for (Index r = 0; r < a.n_rows; ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (Index k = offs[r]; k < offs[r + 1]; ++k) {
      x[cols[k]] += vals[k] * yr;
    }
  }
}

DenseVector spmv_transpose(const SparseMatrix& a, const DenseVector& y) {
  if (static_cast<Index>(y.size()) != a.n_rows) {
    throw std::invalid_argument("spmv_transpose: vector length " + std::to_string(y.size()) +
                                " does not match n_rows " + std::to_string(a.n_rows));
  }
  DenseVector x(static_cast<std::size_t>(a.n_cols));
  spmv_transpose_into(a, y.data(), x.data());
  return x;
}

namespace {

// xorshift-based uniform in [-1, 1]; hermetic so estimates do not depend on
// library distribution internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  double next_symmetric() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }

 private:
  std::uint64_t state_;
};

double norm2(const DenseVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double spectral_norm_estimate(const SparseMatrix& a, int iterations, std::uint64_t seed) {
  if (iterations < 1) {
    throw std::invalid_argument("spectral_norm_estimate: iterations must be >= 1");
  }
  if (a.nnz() == 0 || a.n_rows == 0 || a.n_cols == 0) return 0.0;

  SplitMix64 rng(seed);
  DenseVector v(static_cast<std::size_t>(a.n_cols));
  DenseVector av(static_cast<std::size_t>(a.n_rows));

  // One redraw on a pathological start that lands in the null space.
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (double& x : v) x = rng.next_symmetric();
    double nv = norm2(v);
    if (nv == 0.0) continue;
    for (double& x : v) x /= nv;

    for (int it = 0; it < iterations; ++it) {
      spmv_into(a, v.data(), av.data());
      spmv_transpose_into(a, av.data(), v.data());
      double n = norm2(v);
      if (n == 0.0) break;
      for (double& x : v) x /= n;
    }
    spmv_into(a, v.data(), av.data());
    double sigma = norm2(av);
    if (sigma > 0.0) return sigma;
  }
  return 0.0;
}

std::pair<SparseMatrix, RescalingDiagonals> ruiz_rescale(const SparseMatrix& a, int iterations) {
  if (iterations < 0) {
    throw std::invalid_argument("ruiz_rescale: iterations must be >= 0");
  }
  SparseMatrix scaled = a;
  RescalingDiagonals d;
  d.row_scale.assign(static_cast<std::size_t>(a.n_rows), 1.0);
  d.col_scale.assign(static_cast<std::size_t>(a.n_cols), 1.0);

  DenseVector row_max(static_cast<std::size_t>(a.n_rows));
  DenseVector col_max(static_cast<std::size_t>(a.n_cols));

  for (int it = 0; it < iterations; ++it) {
    std::fill(row_max.begin(), row_max.end(), 0.0);
    std::fill(col_max.begin(), col_max.end(), 0.0);
    for (Index r = 0; r < scaled.n_rows; ++r) {
      for (Index k = scaled.row_offsets[static_cast<std::size_t>(r)];
           k < scaled.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
        double av = std::abs(scaled.values[static_cast<std::size_t>(k)]);
        Index c = scaled.col_indices[static_cast<std::size_t>(k)];
        if (av > row_max[static_cast<std::size_t>(r)]) row_max[static_cast<std::size_t>(r)] = av;
        if (av > col_max[static_cast<std::size_t>(c)]) col_max[static_cast<std::size_t>(c)] = av;
      }
    }
    for (Index r = 0; r < scaled.n_rows; ++r) {
      double m = row_max[static_cast<std::size_t>(r)];
      row_max[static_cast<std::size_t>(r)] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
      d.row_scale[static_cast<std::size_t>(r)] *= row_max[static_cast<std::size_t>(r)];
    }
    for (Index c = 0; c < scaled.n_cols; ++c) {
      double m = col_max[static_cast<std::size_t>(c)];
      col_max[static_cast<std::size_t>(c)] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
      d.col_scale[static_cast<std::size_t>(c)] *= col_max[static_cast<std::size_t>(c)];
    }
    for (Index r = 0; r < scaled.n_rows; ++r) {
      double fr = row_max[static_cast<std::size_t>(r)];
      for (Index k = scaled.row_offsets[static_cast<std::size_t>(r)];
           k < scaled.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
        scaled.values[static_cast<std::size_t>(k)] *=
            fr * col_max[static_cast<std::size_t>(scaled.col_indices[static_cast<std::size_t>(k)])];
      }
    }
  }
  return {std::move(scaled), std::move(d)};
}

double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double linf_norm(const DenseVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double linf_distance(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("linf_distance: length mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const DenseVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_finite(const DenseVector& v, const char* what) {
  if (!all_finite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace marchetype
