#pragma once

// Random fixtures shared by the test programs.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ffinv/ffinv.hpp"

namespace fixtures {

using namespace ffinv;

inline DenseMatrix random_dense(const PrimeField& f, std::size_t r, std::size_t c, SeededRng& rng) {
  DenseMatrix a(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) a.set(i, j, random_residue(f, rng));
  }
  return a;
}

/// Product of random n×r and r×n factors; rank r with high probability.
inline DenseMatrix random_rank(const PrimeField& f, std::size_t n, std::size_t r, SeededRng& rng) {
  if (r == 0) return DenseMatrix(f, n, n);
  return mat_mul(random_dense(f, n, r, rng), random_dense(f, r, n, rng));
}

/// Random permutation plus 3n scattered entries: about 4/n density and
/// nonsingular with high probability; resampled until it is.
inline SparseMatrix random_sparse_nonsingular(const PrimeField& f, std::size_t n, SeededRng& rng) {
  while (true) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    DenseMatrix d(f, n, n);
    for (std::size_t i = 0; i < n; ++i) d.set(i, perm[i], random_nonzero_residue(f, rng));
    for (std::size_t k = 0; k < 3 * n; ++k) d.set(rng.below(n), rng.below(n), random_nonzero_residue(f, rng));
    if (dense_rank(d) == n) return SparseMatrix::from_dense(d);
  }
}

/// Random s×s block Hankel matrix with m block rows.
inline DenseMatrix random_block_hankel(const PrimeField& f, std::size_t s, std::size_t m, SeededRng& rng) {
  std::vector<DenseMatrix> h;
  for (std::size_t k = 0; k < 2 * m - 1; ++k) h.push_back(random_dense(f, s, s, rng));
  return build_block_hankel(h);
}

inline DenseMatrix random_block_toeplitz(const PrimeField& f, std::size_t s, std::size_t m, SeededRng& rng) {
  std::vector<DenseMatrix> col, row;
  for (std::size_t k = 0; k < m; ++k) col.push_back(random_dense(f, s, s, rng));
  row.push_back(col.front());
  for (std::size_t k = 1; k < m; ++k) row.push_back(random_dense(f, s, s, rng));
  return build_block_toeplitz(col, row);
}

}  // namespace fixtures
