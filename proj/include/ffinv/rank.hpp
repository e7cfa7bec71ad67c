#pragma once

// Certified rank and nullspace of a black-box matrix. The matrix is
// preconditioned as Ã = U A L D (random unit-triangular Toeplitz U, L and a
// random diagonal D) so that its leading r×r minor is nonsingular; a
// Monte Carlo rank guess r is then confirmed by a zero Schur complement.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ffinv/blackbox.hpp"
#include "ffinv/krylov.hpp"

namespace ffinv {

/// Minimal linear recurrence of a sequence. `poly` is monic of degree
/// `length`, lowest coefficient first: x² - x - 1 for Fibonacci.
struct LinearRecurrence {
  std::size_t length = 0;
  std::vector<residue> poly;
};

inline LinearRecurrence berlekamp_massey(const PrimeField& f, const std::vector<residue>& seq) {
  std::vector<residue> c{1}, b{1};  // connection polynomials, c(x) = 1 + c_1 x + ...
  std::size_t len = 0, shift = 1;
  residue last_disc = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    residue disc = f.reduce(seq[i]);
    for (std::size_t j = 1; j <= len && j < c.size(); ++j) disc = f.add(disc, f.mul(c[j], f.reduce(seq[i - j])));
    if (disc == 0) {
      ++shift;
      continue;
    }
    const residue coef = f.mul(disc, f.inv(last_disc));
    std::vector<residue> t = c;
    if (c.size() < b.size() + shift) c.resize(b.size() + shift, 0);
    for (std::size_t j = 0; j < b.size(); ++j) c[j + shift] = f.sub(c[j + shift], f.mul(coef, b[j]));
    if (2 * len <= i) {
      len = i + 1 - len;
      b = std::move(t);
      last_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
  }
  c.resize(std::max(c.size(), len + 1), 0);
  LinearRecurrence r;
  r.length = len;
  r.poly.assign(len + 1, 0);
  for (std::size_t i = 0; i <= len; ++i) r.poly[i] = c[len - i];
  return r;
}

/// Ã = U·A·L·D with U unit upper and L unit lower triangular Toeplitz.
struct RankPreconditioner {
  std::vector<residue> upper;  // U[i][i+k] = upper[k-1]
  std::vector<residue> lower;  // L[i+k][i] = lower[k-1]
  std::vector<residue> diag;

  static RankPreconditioner sample(const PrimeField& f, std::size_t n, SeededRng& rng) {
    RankPreconditioner p;
    const std::size_t k = n == 0 ? 0 : n - 1;
    for (std::size_t i = 0; i < k; ++i) p.upper.push_back(random_residue(f, rng));
    for (std::size_t i = 0; i < k; ++i) p.lower.push_back(random_residue(f, rng));
    for (std::size_t i = 0; i < n; ++i) p.diag.push_back(random_nonzero_residue(f, rng));
    return p;
  }

  /// Unit triangular Toeplitz times x; `up` selects U (else L).
  static DenseMatrix toeplitz_apply(const std::vector<residue>& t, bool up, const DenseMatrix& x) {
    const auto& f = x.field();
    const std::size_t n = x.rows(), c = x.cols();
    DenseMatrix out = x;
    std::uint64_t terms = 0;
    for (std::size_t i = 0; i < n; ++i) {
      residue* o = out.row(i);
      for (std::size_t k = 1; k < n; ++k) {
        std::size_t src = 0;
        if (up) {
          if (i + k >= n) break;
          src = i + k;
        } else {
          if (k > i) break;
          src = i - k;
        }
        const residue coef = t[k - 1];
        const residue* xr = x.row(src);
        for (std::size_t j = 0; j < c; ++j) o[j] = f.add_uncounted(o[j], f.mul_uncounted(coef, xr[j]));
        ++terms;
      }
    }
    count_muls(terms * c);
    count_adds(terms * c);
    return out;
  }

  DenseMatrix apply_u(const DenseMatrix& x) const { return toeplitz_apply(upper, true, x); }
  DenseMatrix apply_ut(const DenseMatrix& x) const { return toeplitz_apply(upper, false, x); }
  DenseMatrix apply_l(const DenseMatrix& x) const { return toeplitz_apply(lower, false, x); }
  DenseMatrix apply_lt(const DenseMatrix& x) const { return toeplitz_apply(lower, true, x); }
};

/// The preconditioned black box U·A·L·D.
template <BlackBox B>
class Preconditioned {
 public:
  Preconditioned(const B& a, const RankPreconditioner& p) : a_(a), p_(p) {}
  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const PrimeField& field() const noexcept { return a_.field(); }
  DenseMatrix apply(const DenseMatrix& x) const { return p_.apply_u(a_.apply(p_.apply_l(scale_rows(p_.diag, x)))); }
  DenseMatrix apply_transpose(const DenseMatrix& x) const {
    return scale_rows(p_.diag, p_.apply_lt(a_.apply_transpose(p_.apply_ut(x))));
  }

 private:
  const B& a_;
  const RankPreconditioner& p_;
};

namespace detail {

inline void require_rank_field(const PrimeField& f, std::size_t n) {
  const auto nn = static_cast<unsigned __int128>(n);
  if (static_cast<unsigned __int128>(f.modulus()) < 2 * nn * nn) {
    throw FieldTooSmall("rank routines need p >= 2n^2 (p = " + std::to_string(f.modulus()) +
                        ", n = " + std::to_string(n) + ")");
  }
}

/// deg(minpoly(B·D')) - [x divides it], by Wiedemann on 2n projected terms.
template <BlackBox B>
std::size_t wiedemann_rank(const B& bb, SeededRng& rng) {
  const PrimeField& f = bb.field();
  const std::size_t n = bb.rows();
  std::vector<residue> d2(n), x(n);
  for (auto& v : d2) v = random_nonzero_residue(f, rng);
  for (auto& v : x) v = random_residue(f, rng);
  DenseMatrix y(f, n, 1);
  for (std::size_t i = 0; i < n; ++i) y.set(i, 0, random_residue(f, rng));
  std::vector<residue> seq;
  seq.reserve(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    seq.push_back(dot(f, x.data(), y.data().data(), n));
    count_muls(n);
    count_adds(n - 1);
    if (i + 1 < 2 * n) y = bb.apply(scale_rows(d2, y));
  }
  const LinearRecurrence rec = berlekamp_massey(f, seq);
  if (rec.length == 0) return 0;
  return rec.length - (rec.poly[0] == 0 ? 1 : 0);
}

}  // namespace detail

/// Monte Carlo rank of a square black box.
template <BlackBox B>
std::size_t rank_estimate(const B& a, SeededRng& rng) {
  if (a.rows() != a.cols()) throw DimensionMismatch("rank_estimate: matrix is not square");
  detail::require_rank_field(a.field(), a.rows());
  if (a.rows() == 0) return 0;
  const RankPreconditioner p = RankPreconditioner::sample(a.field(), a.rows(), rng);
  return detail::wiedemann_rank(Preconditioned<B>(a, p), rng);
}

enum class SchurBranch { Transposed, Padded };

inline const char* to_string(SchurBranch b) { return b == SchurBranch::Transposed ? "transposed" : "padded"; }

struct SchurCheck {
  bool is_zero = false;
  DenseMatrix a0inv_a1;  // r×(n-r)
  DenseMatrix schur;     // A₂ A₀⁻¹ A₁ - A₃, (n-r)×(n-r)
  SchurBranch branch = SchurBranch::Transposed;
};

/// For the partition [[A₀, A₁], [A₂, A₃]] with A₀ the leading r×r block and
/// a0_inv = A₀⁻¹, forms A₀⁻¹A₁ and the Schur complement A₂A₀⁻¹A₁ - A₃ using
/// only applications of a and aᵀ.
template <BlackBox B>
SchurCheck schur_complement_check(const B& a, std::size_t r, const DenseMatrix& a0_inv) {
  const PrimeField& f = a.field();
  const std::size_t n = a.rows();
  if (a.cols() != n || r > n || a0_inv.rows() != r || a0_inv.cols() != r) {
    throw DimensionMismatch("schur_complement_check: inconsistent partition");
  }
  const std::size_t q = n - r;
  SchurCheck out{false, DenseMatrix(f, r, q), DenseMatrix(f, q, q), SchurBranch::Transposed};
  if (r < q) {
    // aᵀ [A₀⁻ᵀ; 0] has bottom block A₁ᵀ A₀⁻ᵀ = (A₀⁻¹ A₁)ᵀ; r applications.
    DenseMatrix z(f, n, r);
    z.set_block(0, 0, a0_inv.transpose());
    out.a0inv_a1 = a.apply_transpose(z).rows_range(r, q).transpose();
    out.branch = SchurBranch::Transposed;
  } else {
    // a [0; I] has top block A₁; n - r applications.
    DenseMatrix e(f, n, q);
    for (std::size_t i = 0; i < q; ++i) e.set(r + i, i, 1);
    out.a0inv_a1 = mat_mul(a0_inv, a.apply(e).rows_range(0, r));
    out.branch = SchurBranch::Padded;
  }
  // a [A₀⁻¹A₁; -I] = [0; A₂A₀⁻¹A₁ - A₃].
  DenseMatrix v(f, n, q);
  v.set_block(0, 0, out.a0inv_a1);
  for (std::size_t i = 0; i < q; ++i) v.set(r + i, i, f.neg_uncounted(1));
  out.schur = q == 0 ? DenseMatrix(f, 0, 0) : a.apply(v).rows_range(r, q);
  out.is_zero = out.schur.is_zero();
  return out;
}

struct RankCertificate {
  std::size_t r = 0;
  DenseMatrix nullspace;  // n×(n-r), a·N = 0
  int attempts = 0;
};

struct RankOptions {
  GeneratorStrategy strategy = GeneratorStrategy::DenseOracle;
  int retries = 8;
};

/// Block size for inverting an r×r minor through matrix_inv.
inline std::size_t minor_block_size(std::size_t r) {
  const double cap = std::pow(static_cast<double>(r), 0.79);
  std::size_t best = 1;
  for (std::size_t d = 1; d <= r; ++d) {
    if (r % d == 0 && static_cast<double>(d) <= cap) best = d;
  }
  return best;
}

/// Rank with a nullspace basis that is verified before returning.
template <BlackBox B>
RankCertificate rank_and_nullspace(const B& a, SeededRng& rng, const RankOptions& opt = {}) {
  const PrimeField& f = a.field();
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("rank_and_nullspace: matrix is not square");
  detail::require_rank_field(f, n);
  if (opt.retries < 1) throw UsageError("retry budget must be positive");

  for (int attempt = 1; attempt <= opt.retries; ++attempt) {
    const RankPreconditioner pre = RankPreconditioner::sample(f, n, rng);
    const Preconditioned<B> at(a, pre);
    const std::size_t r = n == 0 ? 0 : detail::wiedemann_rank(at, rng);

    if (r == 0) {
      const DenseMatrix id = DenseMatrix::identity(f, n);
      if (a.apply(id).is_zero()) return {0, id, attempt};
      continue;
    }
    if (r == n) {
      try {
        MatrixInvOptions mo;
        mo.strategy = opt.strategy;
        (void)matrix_inv(at, mo, rng);
        return {n, DenseMatrix(f, n, 0), attempt};
      } catch (const SingularMatrix&) {
        continue;
      }
    }

    DenseMatrix a0_inv(f, 0, 0);
    try {
      const LeadingMinor<Preconditioned<B>> minor(at, r);
      if (r >= 16) {
        MatrixInvOptions mo;
        mo.strategy = opt.strategy;
        mo.s = minor_block_size(r);
        a0_inv = matrix_inv(minor, mo, rng);
      } else {
        a0_inv = dense_inverse(densify(minor), "leading minor");
      }
    } catch (const SingularMatrix&) {
      continue;
    }

    const SchurCheck sc = schur_complement_check(at, r, a0_inv);
    if (!sc.is_zero) continue;

    // Nullspace of Ã is [A₀⁻¹A₁; -I]; that of A is L·D times it.
    DenseMatrix nt(f, n, n - r);
    nt.set_block(0, 0, sc.a0inv_a1);
    for (std::size_t i = 0; i < n - r; ++i) nt.set(r + i, i, f.neg_uncounted(1));
    DenseMatrix null = pre.apply_l(scale_rows(pre.diag, nt));
    if (!a.apply(null).is_zero()) continue;
    return {r, std::move(null), attempt};
  }
  throw RetriesExhausted("rank_and_nullspace: no certified rank after " + std::to_string(opt.retries) +
                         " preconditioner draws");
}

}  // namespace ffinv
