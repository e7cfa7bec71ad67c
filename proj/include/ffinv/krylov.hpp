#pragma once

// Block Krylov inversion: with u the n×s stack of m identities,
//   K_u = [u | A u | ... | A^{m-1} u],   K_v = [uᵀ ; uᵀ A ; ... ; uᵀ A^{m-1}],
//   H = K_v A K_u is block Hankel and A⁻¹ = K_u H⁻¹ K_v.
// A is preconditioned as D A D with a random nonzero diagonal D.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ffinv/blackbox.hpp"
#include "ffinv/costmodel.hpp"
#include "ffinv/geninv.hpp"

namespace ffinv {

namespace detail {

inline std::size_t check_block_split(std::size_t n, std::size_t s) {
  if (s == 0 || n % s != 0) {
    throw DimensionMismatch("block size " + std::to_string(s) + " does not divide " + std::to_string(n));
  }
  return n / s;
}

/// x repeated m times vertically: u·x for an s×k block x.
inline DenseMatrix stack_copies(const DenseMatrix& x, std::size_t m) {
  DenseMatrix out(x.field(), x.rows() * m, x.cols());
  for (std::size_t b = 0; b < m; ++b) out.set_block(b * x.rows(), 0, x);
  return out;
}

}  // namespace detail

inline DenseMatrix build_projection(const PrimeField& f, std::size_t n, std::size_t s) {
  const std::size_t m = detail::check_block_split(n, s);
  return detail::stack_copies(DenseMatrix::identity(f, s), m);
}

/// uᵀ·w: sum of the s-row blocks of w. Additions only.
inline DenseMatrix project(const DenseMatrix& w, std::size_t s) {
  const std::size_t m = detail::check_block_split(w.rows(), s);
  const auto& f = w.field();
  DenseMatrix out = w.rows_range(0, s);
  for (std::size_t b = 1; b < m; ++b) {
    for (std::size_t i = 0; i < s; ++i) {
      residue* o = out.row(i);
      const residue* r = w.row(b * s + i);
      for (std::size_t j = 0; j < w.cols(); ++j) o[j] = f.add_uncounted(o[j], r[j]);
    }
  }
  count_adds((m - 1) * s * w.cols());
  return out;
}

enum class KrylovSide { Left, Right };

struct KrylovBasis {
  std::vector<DenseMatrix> slabs;  // A^i u (n×s) or uᵀ A^i (s×n)
  std::size_t s = 0;
  std::size_t m = 0;
  KrylovSide side = KrylovSide::Right;

  /// K_u as n×n (columns) or K_v as n×n (rows).
  DenseMatrix densify() const {
    const auto& f = slabs.front().field();
    const std::size_t n = s * m;
    DenseMatrix out(f, n, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (side == KrylovSide::Right) {
        out.set_block(0, i * s, slabs[i]);
      } else {
        out.set_block(i * s, 0, slabs[i]);
      }
    }
    return out;
  }
};

template <BlackBox B>
KrylovBasis build_krylov(const B& a, std::size_t s, std::size_t m, KrylovSide side) {
  const std::size_t n = a.rows();
  if (a.cols() != n || s * m != n) throw DimensionMismatch("build_krylov: n != s*m");
  KrylovBasis k{{}, s, m, side};
  const DenseMatrix u = build_projection(a.field(), n, s);
  if (side == KrylovSide::Right) {
    k.slabs.push_back(u);
    for (std::size_t i = 1; i < m; ++i) k.slabs.push_back(a.apply(k.slabs.back()));
  } else {
    DenseMatrix cur = u;  // (uᵀ A^i)ᵀ = (Aᵀ)^i u
    k.slabs.push_back(cur.transpose());
    for (std::size_t i = 1; i < m; ++i) {
      cur = a.apply_transpose(cur);
      k.slabs.push_back(cur.transpose());
    }
  }
  return k;
}

/// H with block (i,j) = uᵀ A^{i+j+1} u, assembled from the 2m-1 distinct
/// blocks. Needs m more applications of A beyond the right Krylov slabs.
template <BlackBox B>
DenseMatrix build_block_hankel_gram(const B& a, const KrylovBasis& ku, const KrylovBasis& kv) {
  if (ku.side != KrylovSide::Right || kv.side != KrylovSide::Left) {
    throw UsageError("build_block_hankel_gram expects (right, left) Krylov bases");
  }
  if (ku.s != kv.s || ku.m != kv.m || ku.s * ku.m != a.rows()) {
    throw DimensionMismatch("build_block_hankel_gram: incompatible Krylov bases");
  }
  const std::size_t s = ku.s, m = ku.m;
  std::vector<DenseMatrix> h;  // h[k-1] = uᵀ A^k u, k = 1 .. 2m-1
  for (std::size_t i = 1; i < m; ++i) h.push_back(project(ku.slabs[i], s));
  DenseMatrix cur = ku.slabs.back();
  for (std::size_t k = m; k <= 2 * m - 1; ++k) {
    cur = a.apply(cur);
    h.push_back(project(cur, s));
  }
  return build_block_hankel(h);
}

/// M·K_v = Σ M_i uᵀ A^i for the n-column slabs M_i (width s), by Horner's rule
/// (((M_{m-1}uᵀ) A + M_{m-2}uᵀ) A + ...) + M_0 uᵀ.
template <BlackBox B>
DenseMatrix horner_left(const DenseMatrix& mtx, const B& a, std::size_t s, std::size_t m) {
  const std::size_t n = a.rows();
  if (s * m != n || mtx.cols() != n) throw DimensionMismatch("horner_left: dimension mismatch");
  auto slab_ut = [&](std::size_t i) { return detail::stack_copies(mtx.cols_range(i * s, s).transpose(), m).transpose(); };
  DenseMatrix acc = slab_ut(m - 1);
  for (std::size_t i = m - 1; i-- > 0;) {
    acc = a.apply_transpose(acc.transpose()).transpose();
    mat_add_inplace(acc, slab_ut(i));
  }
  return acc;
}

/// K_u·N = u N_0 + A(u N_1 + A(... + A u N_{m-1})) for the s-row slabs N_i.
template <BlackBox B>
DenseMatrix horner_right(const DenseMatrix& nmat, const B& a, std::size_t s, std::size_t m) {
  const std::size_t n = a.rows();
  if (s * m != n || nmat.rows() != n) throw DimensionMismatch("horner_right: dimension mismatch");
  auto u_slab = [&](std::size_t i) { return detail::stack_copies(nmat.rows_range(i * s, s), m); };
  DenseMatrix acc = u_slab(m - 1);
  for (std::size_t i = m - 1; i-- > 0;) {
    acc = a.apply(acc);
    mat_add_inplace(acc, u_slab(i));
  }
  return acc;
}

/// V·Q* for the anti-triangular block Hankel V with block column vbar and the
/// upper-triangular block Toeplitz Q* with block row qbar: one n×s by s×n
/// product, then anti-diagonal prefix sums (additions only).
inline DenseMatrix offdiag_recover(const DenseMatrix& vbar, const DenseMatrix& qbar,
                                   RecoveryReport* report = nullptr) {
  const std::size_t s = vbar.cols();
  if (qbar.rows() != s || qbar.cols() != vbar.rows()) throw DimensionMismatch("offdiag_recover: shape mismatch");
  detail::check_block_split(vbar.rows(), s);
  OpCounter product, recovery;
  DenseMatrix out(vbar.field(), 0, 0);
  {
    CounterScope scope(product);
    out = mat_mul(vbar, qbar);
  }
  {
    CounterScope scope(recovery);
    recover_hankel_inplace(out, s);
  }
  if (report != nullptr) *report = {product, recovery};
  return out;
}

struct MatrixInvOptions {
  std::optional<std::size_t> s;
  GeneratorStrategy strategy = GeneratorStrategy::DenseOracle;
  int retries = 8;
  std::optional<OmegaTable> table;
};

struct MatrixInvReport {
  std::size_t s = 0;
  std::size_t m = 0;
  int attempts = 0;
  bool blocking_fallback = false;
  OpCounter krylov;
  OpCounter hankel;
  OpCounter hankel_inverse;
  OpCounter sandwich;
};

/// Blocking used when the caller gives none.
inline Blocking default_blocking(std::size_t n, const std::optional<OmegaTable>& table) {
  if (n < 4) return {1, n, false};
  return choose_blocking(n, table ? *table : OmegaTable::bundled());
}

/// Explicit inverse of a nonsingular black box. Throws FieldTooSmall when
/// p <= 2n and SingularMatrix once every preconditioner draw failed.
template <BlackBox B>
DenseMatrix matrix_inv(const B& a, const MatrixInvOptions& opt, SeededRng& rng, MatrixInvReport* report = nullptr) {
  const PrimeField& f = a.field();
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("matrix_inv: matrix is not square");
  if (n == 0) throw DimensionMismatch("matrix_inv: empty matrix");
  if (f.modulus() <= 2 * n) {
    throw FieldTooSmall("matrix_inv needs p > 2n (p = " + std::to_string(f.modulus()) + ", n = " +
                        std::to_string(n) + "); use a dense method for small fields");
  }
  if (opt.retries < 1) throw UsageError("retry budget must be positive");
  MatrixInvReport rep;
  if (opt.s) {
    rep.s = *opt.s;
    rep.m = detail::check_block_split(n, rep.s);
  } else {
    const Blocking b = default_blocking(n, opt.table);
    rep.s = b.s;
    rep.m = b.m;
    rep.blocking_fallback = b.fallback;
  }
  const std::size_t s = rep.s, m = rep.m;
  std::size_t last_rank = 0;
  std::string last_stage = "block Hankel inversion";
  for (int attempt = 1; attempt <= opt.retries; ++attempt) {
    rep.attempts = attempt;
    std::vector<residue> d(n);
    for (auto& x : d) x = random_nonzero_residue(f, rng);
    const DiagonalSandwich<B> pre(a, d);

    KrylovBasis ku, kv;
    DenseMatrix h(f, 0, 0);
    {
      CounterScope scope(rep.krylov);
      ku = build_krylov(pre, s, m, KrylovSide::Right);
      kv = build_krylov(pre, s, m, KrylovSide::Left);
    }
    {
      CounterScope scope(rep.hankel);
      h = build_block_hankel_gram(pre, ku, kv);
    }
    DenseMatrix hinv(f, 0, 0);
    try {
      CounterScope scope(rep.hankel_inverse);
      hinv = block_struct_inv(h, s, m, OperatorKind::Hankel, opt.strategy);
    } catch (const NotStronglyRegular& e) {
      last_stage = std::string("schur recursion (level ") + std::to_string(e.level()) + ")";
      last_rank = dense_rank(h);
      continue;
    } catch (const SingularMatrix&) {
      last_stage = "block Hankel inversion";
      last_rank = dense_rank(h);
      continue;
    }
    DenseMatrix inv(f, 0, 0);
    {
      CounterScope scope(rep.sandwich);
      inv = horner_right(horner_left(hinv, pre, s, m), pre, s, m);
      inv = scale_cols(scale_rows(d, inv), d);
    }
    if (report != nullptr) *report = rep;
    return inv;
  }
  if (report != nullptr) *report = rep;
  throw SingularMatrix("matrix_inv: " + last_stage + " failed after " + std::to_string(opt.retries) +
                           " preconditioner draws",
                       last_rank);
}

}  // namespace ffinv
