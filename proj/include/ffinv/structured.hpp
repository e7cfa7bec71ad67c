#pragma once

// Dense materializations of the named structured matrices. Block indices are
// 0-based: a block column W (n×s) holds w_0 .. w_{m-1} top to bottom.

#include <cstddef>
#include <vector>

#include "ffinv/matrix.hpp"

namespace ffinv {

namespace detail {

inline std::size_t block_count(const DenseMatrix& w, std::size_t s, const char* what) {
  if (s == 0 || w.cols() != s || w.rows() % s != 0) {
    throw DimensionMismatch(std::string(what) + ": expected an (m*s)x s block column");
  }
  return w.rows() / s;
}

}  // namespace detail

/// Z_f: ones on the subdiagonal, f in the top-right corner.
struct ShiftMatrix {
  std::size_t n;
  residue f = 0;
  bool transposed = false;

  DenseMatrix materialize(const PrimeField& field) const {
    DenseMatrix z(field, n, n);
    for (std::size_t i = 1; i < n; ++i) z.set(i, i - 1, 1);
    if (n > 0) {
      const residue corner = field.reduce(f);
      if (n == 1) {
        z.set(0, 0, corner);
      } else {
        z.set(0, n - 1, corner);
      }
    }
    return transposed ? z.transpose() : z;
  }
};

/// Block down-shift by s: (N·M) moves block rows of M down by one.
inline DenseMatrix block_shift(const PrimeField& f, std::size_t n, std::size_t s) {
  DenseMatrix z(f, n, n);
  for (std::size_t i = s; i < n; ++i) z.set(i, i - s, 1);
  return z;
}

/// Block lower-triangular block Toeplitz with first block column W.
inline DenseMatrix build_L(const DenseMatrix& w, std::size_t s) {
  const std::size_t m = detail::block_count(w, s, "build_L");
  DenseMatrix out(w.field(), m * s, m * s);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k <= j; ++k) out.set_block(j * s, k * s, w.block((j - k) * s, 0, s, s));
  }
  return out;
}

inline DenseMatrix build_U(const DenseMatrix& w, std::size_t s) { return build_L(w, s).transpose(); }

/// Anti-triangular block Hankel: block (j,k) = w_{j+k} when j+k < m, zero below the anti-diagonal.
inline DenseMatrix build_G(const DenseMatrix& w, std::size_t s) {
  const std::size_t m = detail::block_count(w, s, "build_G");
  DenseMatrix out(w.field(), m * s, m * s);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; j + k < m; ++k) out.set_block(j * s, k * s, w.block((j + k) * s, 0, s, s));
  }
  return out;
}

/// Upper-triangular block Toeplitz whose first block row is the s×n matrix q.
inline DenseMatrix build_uptri_toeplitz(const DenseMatrix& q, std::size_t s) {
  return build_U(q.transpose(), s);
}

inline DenseMatrix build_antitri_hankel(const DenseMatrix& v, std::size_t s) { return build_G(v, s); }

inline DenseMatrix build_D(const std::vector<DenseMatrix>& blocks) {
  if (blocks.empty()) throw DimensionMismatch("build_D: no blocks");
  const std::size_t s = blocks.front().rows();
  DenseMatrix out(blocks.front().field(), blocks.size() * s, blocks.size() * s);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].rows() != s || blocks[i].cols() != s) {
      throw DimensionMismatch("build_D: blocks must be square and equally sized");
    }
    require_same_field(blocks[i].field(), out.field());
    out.set_block(i * s, i * s, blocks[i]);
  }
  return out;
}

/// Row i is (1, u_i, u_i^2, ..., u_i^{n-1}).
inline DenseMatrix build_V(const PrimeField& f, const std::vector<residue>& u) {
  const std::size_t n = u.size();
  DenseMatrix out(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    residue x = 1 % f.modulus();
    for (std::size_t j = 0; j < n; ++j) {
      out.set(i, j, x);
      x = f.mul(x, f.reduce(u[i]));
    }
  }
  return out;
}

/// [T]_{i,j} = t_{i-j}: first_col holds t_0, t_1, ...; first_row holds t_0, t_{-1}, ...
inline DenseMatrix build_block_toeplitz(const std::vector<DenseMatrix>& first_col,
                                        const std::vector<DenseMatrix>& first_row) {
  const std::size_t m = first_col.size();
  if (m == 0 || first_row.size() != m) throw DimensionMismatch("build_block_toeplitz: block counts differ");
  if (!(first_col.front() == first_row.front())) {
    throw UsageError("build_block_toeplitz: first row and column disagree on the corner block");
  }
  const std::size_t s = first_col.front().rows();
  DenseMatrix out(first_col.front().field(), m * s, m * s);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const DenseMatrix& b = i >= j ? first_col[i - j] : first_row[j - i];
      if (b.rows() != s || b.cols() != s) throw DimensionMismatch("build_block_toeplitz: inconsistent blocks");
      out.set_block(i * s, j * s, b);
    }
  }
  return out;
}

/// [H]_{i,j} = h_{i+j} from 2m-1 blocks.
inline DenseMatrix build_block_hankel(const std::vector<DenseMatrix>& h) {
  if (h.empty() || h.size() % 2 == 0) throw DimensionMismatch("build_block_hankel: need 2m-1 blocks");
  const std::size_t m = (h.size() + 1) / 2;
  const std::size_t s = h.front().rows();
  DenseMatrix out(h.front().field(), m * s, m * s);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const DenseMatrix& b = h[i + j];
      if (b.rows() != s || b.cols() != s) throw DimensionMismatch("build_block_hankel: inconsistent blocks");
      out.set_block(i * s, j * s, b);
    }
  }
  return out;
}

}  // namespace ffinv
