#pragma once

// Displacement operators, generator compression and explicit recovery of a
// matrix from its displacement X·Yᵀ.
//
// All shifts are block shifts by s (N = Z_0 ⊗ I_s):
//   Toeplitz      A - N A Nᵀ            A[i][j] - A[i-s][j-s]
//   Hankel        A - Nᵀ A Nᵀ           A[i][j] - A[i+s][j-s]
//   Vandermonde   A - D(U) A Nᵀ         A_{i,j} - u_i A_{i,j-1}
//   Cauchy        D(U) A - A D(V)       (u_i - v_j) A_{i,j}, scalar u_i, v_j

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffinv/matrix.hpp"

namespace ffinv {

enum class OperatorKind { Toeplitz, Hankel, Vandermonde, Cauchy };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Toeplitz: return "toeplitz";
    case OperatorKind::Hankel: return "hankel";
    case OperatorKind::Vandermonde: return "vandermonde";
    case OperatorKind::Cauchy: return "cauchy";
  }
  return "?";
}

/// Symbolic (P, Q) pair; never materialized.
struct DisplacementOperator {
  OperatorKind kind = OperatorKind::Toeplitz;
  std::size_t n = 0;
  std::size_t s = 1;
  std::vector<DenseMatrix> u_blocks;  // Vandermonde: m blocks of s×s
  std::vector<residue> u;             // Cauchy: one scalar per block row
  std::vector<residue> v;             // Cauchy: one scalar per block column

  std::size_t m() const { return n / s; }

  static DisplacementOperator toeplitz(std::size_t n, std::size_t s) {
    check_blocking(n, s);
    return {OperatorKind::Toeplitz, n, s, {}, {}, {}};
  }
  static DisplacementOperator hankel(std::size_t n, std::size_t s) {
    check_blocking(n, s);
    return {OperatorKind::Hankel, n, s, {}, {}, {}};
  }
  static DisplacementOperator vandermonde(std::vector<DenseMatrix> blocks) {
    if (blocks.empty()) throw DimensionMismatch("vandermonde operator needs parameters");
    const std::size_t s = blocks.front().rows();
    for (const auto& b : blocks) {
      if (b.rows() != s || b.cols() != s) throw DimensionMismatch("vandermonde parameters must be s×s");
    }
    const std::size_t n = s * blocks.size();
    return {OperatorKind::Vandermonde, n, s, std::move(blocks), {}, {}};
  }
  /// Scalar parameters u_i I_s, a convenience for the commuting case.
  static DisplacementOperator vandermonde_scalar(const PrimeField& f, std::size_t s,
                                                 const std::vector<residue>& u) {
    std::vector<DenseMatrix> blocks;
    for (auto x : u) blocks.push_back(mat_scale(DenseMatrix::identity(f, s), f.reduce(x)));
    return vandermonde(std::move(blocks));
  }
  static DisplacementOperator cauchy(std::size_t s, std::vector<residue> u, std::vector<residue> v) {
    if (u.size() != v.size() || u.empty()) throw DimensionMismatch("cauchy parameters must have m entries each");
    const std::size_t n = s * u.size();
    return {OperatorKind::Cauchy, n, s, {}, std::move(u), std::move(v)};
  }

  /// False only for Cauchy parameters with some u_i = v_j.
  bool invertible(const PrimeField& f) const {
    if (kind != OperatorKind::Cauchy) return true;
    for (auto a : u) {
      for (auto b : v) {
        if (f.reduce(a) == f.reduce(b)) return false;
      }
    }
    return true;
  }

  static void check_blocking(std::size_t n, std::size_t s) {
    if (s == 0 || n % s != 0) {
      throw DimensionMismatch("block size " + std::to_string(s) + " does not divide " + std::to_string(n));
    }
  }
};

/// Δ(A) = X·Yᵀ with X, Y of width alpha·s.
struct GeneratorPair {
  DenseMatrix x;
  DenseMatrix y;
  DisplacementOperator op;

  std::size_t width() const { return x.cols(); }
  std::size_t alpha() const { return x.cols() / op.s; }
  DenseMatrix x_slab(std::size_t i) const { return x.cols_range(i * op.s, op.s); }
  DenseMatrix y_slab(std::size_t i) const { return y.cols_range(i * op.s, op.s); }
};

/// Counters for the two stages of a recovery.
struct RecoveryReport {
  OpCounter product;
  OpCounter recovery;
};

namespace detail {

inline void check_operand(const DisplacementOperator& op, const DenseMatrix& a) {
  if (a.rows() != op.n || a.cols() != op.n) {
    throw DimensionMismatch("operand is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            ", operator expects " + std::to_string(op.n));
  }
}

}  // namespace detail

inline DenseMatrix apply_displacement(const DisplacementOperator& op, const DenseMatrix& a) {
  detail::check_operand(op, a);
  const auto& f = a.field();
  const std::size_t n = op.n, s = op.s, m = op.m();
  DenseMatrix out = a;
  switch (op.kind) {
    case OperatorKind::Toeplitz:
      for (std::size_t i = s; i < n; ++i) {
        for (std::size_t j = s; j < n; ++j) out.ref(i, j) = f.sub_uncounted(a.at(i, j), a.at(i - s, j - s));
      }
      count_adds((n - s) * (n - s));
      break;
    case OperatorKind::Hankel:
      for (std::size_t i = 0; i + s < n; ++i) {
        for (std::size_t j = s; j < n; ++j) out.ref(i, j) = f.sub_uncounted(a.at(i, j), a.at(i + s, j - s));
      }
      count_adds((n - s) * (n - s));
      break;
    case OperatorKind::Vandermonde:
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 1; j < m; ++j) {
          const DenseMatrix prod = mat_mul(op.u_blocks[i], a.block(i * s, (j - 1) * s, s, s));
          out.set_block(i * s, j * s, mat_sub(a.block(i * s, j * s, s, s), prod));
        }
      }
      break;
    case OperatorKind::Cauchy:
      for (std::size_t bi = 0; bi < m; ++bi) {
        for (std::size_t bj = 0; bj < m; ++bj) {
          const residue c = f.sub(f.reduce(op.u[bi]), f.reduce(op.v[bj]));
          for (std::size_t i = bi * s; i < (bi + 1) * s; ++i) {
            for (std::size_t j = bj * s; j < (bj + 1) * s; ++j) out.ref(i, j) = f.mul_uncounted(c, a.at(i, j));
          }
        }
      }
      count_muls(n * n);
      break;
  }
  return out;
}

inline std::size_t displacement_rank(const DisplacementOperator& op, const DenseMatrix& a) {
  return dense_rank(apply_displacement(op, a));
}

namespace detail {

inline std::size_t padded_width(std::size_t r, std::size_t s, std::size_t min_blocks) {
  return std::max((r + s - 1) / s, min_blocks) * s;
}

inline DenseMatrix pad_cols(const DenseMatrix& x, std::size_t width) {
  if (x.cols() == width) return x;
  DenseMatrix out(x.field(), x.rows(), width);
  out.set_block(0, 0, x);
  return out;
}

inline DenseMatrix select_cols(const DenseMatrix& x, const std::vector<std::size_t>& cols) {
  DenseMatrix out(x.field(), x.rows(), cols.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) out.set(i, k, x.at(i, cols[k]));
  }
  return out;
}

}  // namespace detail

/// Rank factorization M = C·R where C are the pivot columns of M and R the
/// nonzero rows of its reduced echelon form. Returns (C, Rᵀ).
inline std::pair<DenseMatrix, DenseMatrix> rank_factor(const DenseMatrix& m) {
  Echelon e = row_echelon(m);
  const std::size_t r = e.pivots.size();
  return {detail::select_cols(m, e.pivots), e.rref.rows_range(0, r).transpose()};
}

/// Generators of Δ(a) from a rank factorization, padded to whole slabs.
inline GeneratorPair compress(const DisplacementOperator& op, const DenseMatrix& a,
                              std::optional<std::size_t> alpha_hint = std::nullopt) {
  auto [x, y] = rank_factor(apply_displacement(op, a));
  const std::size_t w = detail::padded_width(x.cols(), op.s, alpha_hint.value_or(0));
  return {detail::pad_cols(x, w), detail::pad_cols(y, w), op};
}

/// Re-factors P·Qᵀ to minimal width without forming the n×n product; O(n·w²).
inline std::pair<DenseMatrix, DenseMatrix> truncate_generators(const DenseMatrix& p, const DenseMatrix& q) {
  require_same_field(p.field(), q.field());
  if (p.cols() != q.cols() || p.rows() == 0) throw DimensionMismatch("truncate_generators: width mismatch");
  // P = P_J F, so P Qᵀ = P_J (Q Fᵀ)ᵀ; repeat on Q Fᵀ.
  auto [pj, ft] = rank_factor(p);
  const DenseMatrix q1 = mat_mul(q, ft);
  auto [qj, f2t] = rank_factor(q1);
  return {mat_mul(pj, f2t), qj};
}

inline GeneratorPair truncate(const GeneratorPair& g, std::size_t min_blocks = 0) {
  if (g.width() == 0) return g;
  auto [x, y] = truncate_generators(g.x, g.y);
  const std::size_t w = detail::padded_width(x.cols(), g.op.s, min_blocks);
  return {detail::pad_cols(x, w), detail::pad_cols(y, w), g.op};
}

// ---------------------------------------------------------------------------
// Recovery kernels (additions only for Toeplitz / Hankel)
// ---------------------------------------------------------------------------

/// Solves A - N A Nᵀ = M in place: A[i][j] = M[i][j] + A[i-s][j-s].
inline void recover_toeplitz_inplace(DenseMatrix& m, std::size_t s) {
  const auto& f = m.field();
  const std::size_t n = m.rows();
  for (std::size_t i = s; i < n; ++i) {
    residue* cur = m.row(i);
    const residue* prev = m.row(i - s);
    for (std::size_t j = s; j < n; ++j) cur[j] = f.add_uncounted(cur[j], prev[j - s]);
  }
  if (n > s) count_adds((n - s) * (n - s));
}

/// Solves A - Nᵀ A Nᵀ = M in place: A[i][j] = M[i][j] + A[i+s][j-s], bottom rows first.
inline void recover_hankel_inplace(DenseMatrix& m, std::size_t s) {
  const auto& f = m.field();
  const std::size_t n = m.rows();
  for (std::size_t i = n - s; i-- > 0;) {
    residue* cur = m.row(i);
    const residue* below = m.row(i + s);
    for (std::size_t j = s; j < n; ++j) cur[j] = f.add_uncounted(cur[j], below[j - s]);
  }
  if (n > s) count_adds((n - s) * (n - s));
}

/// Block column recursion A_{i,0} = M_{i,0}, A_{i,j} = M_{i,j} + u_i A_{i,j-1}.
/// Each block row depends on its left neighbour, so rows are independent.
inline void recover_vandermonde_inplace(DenseMatrix& m, const DisplacementOperator& op) {
  const std::size_t s = op.s, mb = op.m();
  for (std::size_t i = 0; i < mb; ++i) {
    for (std::size_t j = 1; j < mb; ++j) {
      const DenseMatrix prev = m.block(i * s, (j - 1) * s, s, s);
      m.set_block(i * s, j * s, mat_add(m.block(i * s, j * s, s, s), mat_mul(op.u_blocks[i], prev)));
    }
  }
}

/// A_{i,j} = (u_i - v_j)^{-1} M_{i,j}.
inline void recover_cauchy_inplace(DenseMatrix& m, const DisplacementOperator& op) {
  const auto& f = m.field();
  if (!op.invertible(f)) throw OperatorSingular("cauchy parameters collide: some u_i equals v_j");
  const std::size_t s = op.s, mb = op.m();
  for (std::size_t bi = 0; bi < mb; ++bi) {
    for (std::size_t bj = 0; bj < mb; ++bj) {
      const residue c = f.inv(f.sub(f.reduce(op.u[bi]), f.reduce(op.v[bj])));
      for (std::size_t i = bi * s; i < (bi + 1) * s; ++i) {
        for (std::size_t j = bj * s; j < (bj + 1) * s; ++j) m.ref(i, j) = f.mul_uncounted(c, m.at(i, j));
      }
    }
  }
  count_muls(op.n * op.n);
}

inline void recover_inplace(DenseMatrix& m, const DisplacementOperator& op) {
  switch (op.kind) {
    case OperatorKind::Toeplitz: recover_toeplitz_inplace(m, op.s); break;
    case OperatorKind::Hankel: recover_hankel_inplace(m, op.s); break;
    case OperatorKind::Vandermonde: recover_vandermonde_inplace(m, op); break;
    case OperatorKind::Cauchy: recover_cauchy_inplace(m, op); break;
  }
}

namespace detail {

inline DenseMatrix generator_product(const GeneratorPair& g, const PrimeField& f) {
  if (g.x.rows() != g.op.n || g.y.rows() != g.op.n || g.x.cols() != g.y.cols()) {
    throw DimensionMismatch("generator shapes do not match the operator");
  }
  if (g.width() == 0) return DenseMatrix(f, g.op.n, g.op.n);
  return mat_mul_abt(g.x, g.y);
}

}  // namespace detail

/// The unique A with Δ(A) = X·Yᵀ: one rectangular product, then a recovery pass.
inline DenseMatrix decompress(const GeneratorPair& g, RecoveryReport* report = nullptr) {
  const PrimeField& f = g.x.field();
  OpCounter product, recovery;
  DenseMatrix a(f, 0, 0);
  {
    CounterScope scope(product);
    a = detail::generator_product(g, f);
  }
  {
    CounterScope scope(recovery);
    recover_inplace(a, g.op);
  }
  if (report != nullptr) *report = {product, recovery};
  return a;
}

inline DenseMatrix decompress_toeplitz(const GeneratorPair& g, RecoveryReport* report = nullptr) {
  if (g.op.kind != OperatorKind::Toeplitz) throw UsageError("decompress_toeplitz: operator is not Toeplitz");
  return decompress(g, report);
}
inline DenseMatrix decompress_hankel(const GeneratorPair& g, RecoveryReport* report = nullptr) {
  if (g.op.kind != OperatorKind::Hankel) throw UsageError("decompress_hankel: operator is not Hankel");
  return decompress(g, report);
}
inline DenseMatrix decompress_vandermonde(const GeneratorPair& g, RecoveryReport* report = nullptr) {
  if (g.op.kind != OperatorKind::Vandermonde) throw UsageError("decompress_vandermonde: operator is not Vandermonde");
  return decompress(g, report);
}
inline DenseMatrix decompress_cauchy(const GeneratorPair& g, RecoveryReport* report = nullptr) {
  if (g.op.kind != OperatorKind::Cauchy) throw UsageError("decompress_cauchy: operator is not Cauchy");
  return decompress(g, report);
}

}  // namespace ffinv
