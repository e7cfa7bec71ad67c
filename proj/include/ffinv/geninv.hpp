#pragma once

// Generators of A⁻¹ and the explicit inversion of block Toeplitz/Hankel-like
// matrices from those generators.
//
// Notation: N is the block down-shift, Δ+(R) = R - N R Nᵀ (the Toeplitz
// operator) and Δ-(W) = W - Nᵀ W N. If Δ+(R) has rank α then so does Δ-(R⁻¹).
// J is the block reversal; J Nᵀ J = N turns Δ- representations into Δ+ ones.

#include <cstddef>
#include <utility>
#include <vector>

#include "ffinv/displacement.hpp"
#include "ffinv/structured.hpp"

namespace ffinv {

enum class GeneratorStrategy { DenseOracle, SchurRecursive };

inline const char* to_string(GeneratorStrategy s) {
  return s == GeneratorStrategy::DenseOracle ? "dense-oracle" : "schur";
}

namespace detail {

inline DenseMatrix block_reverse_rows(const DenseMatrix& x, std::size_t s) {
  const std::size_t m = x.rows() / s;
  DenseMatrix out(x.field(), x.rows(), x.cols());
  for (std::size_t b = 0; b < m; ++b) out.set_block((m - 1 - b) * s, 0, x.rows_range(b * s, s));
  return out;
}

inline DenseMatrix block_reverse_cols(const DenseMatrix& x, std::size_t s) {
  return block_reverse_rows(x.transpose(), s).transpose();
}

/// N·x: rows move down by s.
inline DenseMatrix shift_down(const DenseMatrix& x, std::size_t s) {
  DenseMatrix out(x.field(), x.rows(), x.cols());
  if (x.rows() > s) out.set_block(s, 0, x.rows_range(0, x.rows() - s));
  return out;
}

/// Nᵀ·x: rows move up by s.
inline DenseMatrix shift_up(const DenseMatrix& x, std::size_t s) {
  DenseMatrix out(x.field(), x.rows(), x.cols());
  if (x.rows() > s) out.set_block(0, 0, x.rows_range(s, x.rows() - s));
  return out;
}

inline DenseMatrix unit_block(const PrimeField& f, std::size_t n, std::size_t s, std::size_t b) {
  DenseMatrix e(f, n, s);
  for (std::size_t i = 0; i < s; ++i) e.set(b * s + i, i, 1);
  return e;
}

/// R from Δ+(R) = G Hᵀ.
inline DenseMatrix materialize_plus(const DenseMatrix& g, const DenseMatrix& h, std::size_t s) {
  DenseMatrix r = g.cols() == 0 ? DenseMatrix(g.field(), g.rows(), g.rows()) : mat_mul_abt(g, h);
  recover_toeplitz_inplace(r, s);
  return r;
}

/// W from Δ-(W) = X Yᵀ, via J W J = recovery of (JX)(JY)ᵀ.
inline DenseMatrix materialize_minus(const DenseMatrix& x, const DenseMatrix& y, std::size_t s) {
  DenseMatrix jw = materialize_plus(block_reverse_rows(x, s), block_reverse_rows(y, s), s);
  return block_reverse_cols(block_reverse_rows(jw, s), s);
}

inline std::pair<DenseMatrix, DenseMatrix> truncated(const DenseMatrix& p, const DenseMatrix& q) {
  if (p.cols() == 0) return {p, q};
  return truncate_generators(p, q);
}

/// Given Δ+(R) = G Hᵀ, returns (X, Y) with Δ-(R⁻¹) = X Yᵀ. Splits at ⌈m/2⌉
/// blocks and recurses on the leading block and on its Schur complement.
inline std::pair<DenseMatrix, DenseMatrix> inv_minus(const DenseMatrix& g, const DenseMatrix& h,
                                                     std::size_t s, int level) {
  const PrimeField& f = g.field();
  const std::size_t n = g.rows();
  const std::size_t m = n / s;
  if (m == 1) {
    const DenseMatrix r = materialize_plus(g, h, s);
    try {
      return {dense_inverse(r, "schur base block"), DenseMatrix::identity(f, s)};
    } catch (const SingularMatrix&) {
      throw NotStronglyRegular(level);
    }
  }
  const std::size_t k = ((m + 1) / 2) * s;
  const std::size_t nk = n - k;
  const DenseMatrix r = materialize_plus(g, h, s);
  const DenseMatrix g1 = g.rows_range(0, k), h1 = h.rows_range(0, k);

  auto [xa, ya] = inv_minus(g1, h1, s, level + 1);
  const DenseMatrix ainv = materialize_minus(xa, ya, s);
  const DenseMatrix ainv_t = ainv.transpose();

  const DenseMatrix rc = r.cols_range(0, k);     // R E_k
  const DenseMatrix rr_t = r.rows_range(0, k).transpose();  // (E_kᵀ R)ᵀ

  // Δ+ of the zero-bordered Schur complement R - Rc A⁻¹ Rr.
  const DenseMatrix ag1 = mat_mul(ainv, g1);
  const DenseMatrix ath1 = mat_mul(ainv_t, h1);
  const DenseMatrix p_first = mat_sub(g, mat_mul(rc, ag1));
  const DenseMatrix q_second = mat_sub(mat_mul(rr_t, ath1), mat_mul(h, mat_mul(g1.transpose(), ath1)));
  const DenseMatrix p_third = shift_down(mat_mul(rc, xa), s);
  const DenseMatrix q_third = shift_down(mat_mul(rr_t, ya), s);
  const DenseMatrix p = hcat(hcat(p_first, mat_neg(g)), p_third);
  const DenseMatrix q = hcat(hcat(h, q_second), q_third);
  auto [gs, hs] = truncated(p.rows_range(k, nk), q.rows_range(k, nk));

  auto [xs, ys] = inv_minus(gs, hs, s, level + 1);
  const DenseMatrix sinv = materialize_minus(xs, ys, s);
  const DenseMatrix sinv_t = sinv.transpose();

  const DenseMatrix b = r.block(0, k, k, nk);
  const DenseMatrix c = r.block(k, 0, nk, k);
  const DenseMatrix b_t = b.transpose(), c_t = c.transpose();

  // Block elimination with the two explicit sub-inverses.
  auto solve = [&](const DenseMatrix& v) {
    const DenseMatrix y1 = mat_mul(ainv, v.rows_range(0, k));
    const DenseMatrix z2 = mat_mul(sinv, mat_sub(v.rows_range(k, nk), mat_mul(c, y1)));
    return vcat(mat_sub(y1, mat_mul(ainv, mat_mul(b, z2))), z2);
  };
  auto solve_t = [&](const DenseMatrix& v) {
    const DenseMatrix y1 = mat_mul(ainv_t, v.rows_range(0, k));
    const DenseMatrix z2 = mat_mul(sinv_t, mat_sub(v.rows_range(k, nk), mat_mul(b_t, y1)));
    return vcat(mat_sub(y1, mat_mul(ainv_t, mat_mul(c_t, z2))), z2);
  };

  const DenseMatrix en = unit_block(f, n, s, m - 1);
  const DenseMatrix x_first = mat_sub(en, shift_up(solve(shift_down(r.cols_range(n - s, s), s)), s));
  const DenseMatrix y_first = solve_t(en);
  const DenseMatrix x_second = shift_up(solve(g), s);
  const DenseMatrix y_second = solve_t(shift_up(h, s));
  return truncated(hcat(x_first, x_second), hcat(y_first, y_second));
}

/// Δ- generators of W to Δ+ generators, using the first block row/column of W.
inline std::pair<DenseMatrix, DenseMatrix> minus_to_plus(const DenseMatrix& x, const DenseMatrix& y,
                                                         const DenseMatrix& w, std::size_t s) {
  const PrimeField& f = w.field();
  const std::size_t n = w.rows();
  const DenseMatrix e1 = unit_block(f, n, s, 0);
  const DenseMatrix w_e1 = w.cols_range(0, s);
  const DenseMatrix wt_e1 = w.rows_range(0, s).transpose();
  DenseMatrix corrected = w_e1;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) corrected.set(i, j, 0);
  }
  const DenseMatrix p = hcat(hcat(mat_neg(shift_down(x, s)), e1), corrected);
  const DenseMatrix q = hcat(hcat(shift_down(y, s), wt_e1), e1);
  return truncated(p, q);
}

inline GeneratorPair to_pair(std::pair<DenseMatrix, DenseMatrix> xy, const DisplacementOperator& op) {
  const std::size_t w = padded_width(xy.first.cols(), op.s, 0);
  return {pad_cols(xy.first, w), pad_cols(xy.second, w), op};
}

}  // namespace detail

/// (X, Y) with A⁻¹ - Nᵀ A⁻¹ N = X Yᵀ for a strongly regular A given by its
/// Toeplitz generators; N is the block down-shift. Width is minimal.
inline std::pair<DenseMatrix, DenseMatrix> inverse_minus_generators(const GeneratorPair& plus) {
  if (plus.op.kind != OperatorKind::Toeplitz) throw UsageError("inverse_minus_generators needs Toeplitz generators");
  return detail::inv_minus(plus.x, plus.y, plus.op.s, 0);
}

/// Generators of A⁻¹ under the operator `op` (Toeplitz input gives Toeplitz
/// generators of the inverse, Hankel gives Hankel).
inline GeneratorPair inverse_generators(const DenseMatrix& a, const DisplacementOperator& op,
                                        GeneratorStrategy strategy) {
  detail::check_operand(op, a);
  if (strategy == GeneratorStrategy::DenseOracle) {
    return compress(op, dense_inverse(a, "inverse generators"));
  }
  const std::size_t s = op.s;
  if (op.kind == OperatorKind::Toeplitz) {
    const GeneratorPair g = compress(op, a);
    auto [x, y] = detail::inv_minus(g.x, g.y, s, 0);
    const DenseMatrix w = detail::materialize_minus(x, y, s);
    return detail::to_pair(detail::minus_to_plus(x, y, w, s), op);
  }
  if (op.kind == OperatorKind::Hankel) {
    // J·A is Toeplitz-like with Δ+ generators (J G, H).
    const GeneratorPair g = compress(op, a);
    auto [x, y] = detail::inv_minus(detail::block_reverse_rows(g.x, s), g.y, s, 0);
    return detail::to_pair({x, detail::block_reverse_rows(y, s)}, op);
  }
  throw UsageError(std::string("Schur recursion is only available for Toeplitz and Hankel operators, not ") +
                   to_string(op.kind));
}

/// Per-stage counters of block_struct_inv.
struct BlockInvReport {
  OpCounter generators;
  OpCounter products;
  OpCounter recovery;
  std::size_t width = 0;
};

/// Σ X_i Y_iᵀ over slabs, accumulated in slab order.
inline DenseMatrix slab_product_sum(const GeneratorPair& g) {
  const PrimeField& f = g.x.field();
  DenseMatrix acc(f, g.op.n, g.op.n);
  for (std::size_t i = 0; i < g.alpha(); ++i) mat_add_inplace(acc, mat_mul_abt(g.x_slab(i), g.y_slab(i)));
  return acc;
}

/// Explicit A⁻¹ = recovery(Σ X_i Y_iᵀ) for the generators of A⁻¹.
inline DenseMatrix block_struct_inv(const DenseMatrix& a, std::size_t s, std::size_t m, OperatorKind kind,
                                    GeneratorStrategy strategy, BlockInvReport* report = nullptr) {
  if (a.rows() != s * m || a.cols() != s * m) throw DimensionMismatch("block_struct_inv: n != s*m");
  if (kind != OperatorKind::Toeplitz && kind != OperatorKind::Hankel) {
    throw UsageError("block_struct_inv handles Toeplitz and Hankel operators");
  }
  const DisplacementOperator op = kind == OperatorKind::Toeplitz ? DisplacementOperator::toeplitz(s * m, s)
                                                                  : DisplacementOperator::hankel(s * m, s);
  BlockInvReport local;
  GeneratorPair g{DenseMatrix(a.field(), 0, 0), DenseMatrix(a.field(), 0, 0), op};
  {
    CounterScope scope(local.generators);
    g = inverse_generators(a, op, strategy);
  }
  DenseMatrix out(a.field(), 0, 0);
  {
    CounterScope scope(local.products);
    out = slab_product_sum(g);
  }
  {
    CounterScope scope(local.recovery);
    recover_inplace(out, op);
  }
  local.width = g.width();
  if (report != nullptr) *report = local;
  return out;
}

/// Column-by-column reconstruction Σ_i F(X_i)·(U(Y_i) E_j), with F = L for
/// Toeplitz and F = G for Hankel. Only the nonzero s×s block products are
/// formed. This is the baseline the single rectangular product replaces.
inline DenseMatrix naive_column_recovery(const GeneratorPair& g) {
  const PrimeField& f = g.x.field();
  const std::size_t s = g.op.s, m = g.op.m();
  const bool hankel = g.op.kind == OperatorKind::Hankel;
  if (!hankel && g.op.kind != OperatorKind::Toeplitz) throw UsageError("naive recovery needs Toeplitz or Hankel");
  DenseMatrix out(f, g.op.n, g.op.n);
  for (std::size_t i = 0; i < g.alpha(); ++i) {
    const DenseMatrix xs = g.x_slab(i), ys = g.y_slab(i);
    for (std::size_t j = 0; j < m; ++j) {
      // Block column j of U(Y_i) has block r equal to y_{j-r}ᵀ for r <= j.
      std::vector<DenseMatrix> ucol;
      for (std::size_t r = 0; r <= j; ++r) ucol.push_back(ys.rows_range((j - r) * s, s).transpose());
      for (std::size_t a = 0; a < m; ++a) {
        DenseMatrix acc(f, s, s);
        bool any = false;
        for (std::size_t r = 0; r <= j; ++r) {
          std::size_t idx = 0;
          if (hankel) {
            if (a + r >= m) continue;
            idx = a + r;
          } else {
            if (r > a) continue;
            idx = a - r;
          }
          const DenseMatrix prod = mat_mul(xs.rows_range(idx * s, s), ucol[r]);
          if (any) {
            mat_add_inplace(acc, prod);
          } else {
            acc = prod;
            any = true;
          }
        }
        if (any) {
          DenseMatrix cur = out.block(a * s, j * s, s, s);
          mat_add_inplace(cur, acc);
          out.set_block(a * s, j * s, cur);
        }
      }
    }
  }
  return out;
}

}  // namespace ffinv
