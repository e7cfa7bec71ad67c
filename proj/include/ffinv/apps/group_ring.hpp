#pragma once

// Group rings F[G] of metacyclic groups
//   G = <σ, τ | σ^m = 1, τ^s = σ^t, τ⁻¹στ = σ^u>.
// Elements are σ^a τ^b with 0 <= a < m, 0 <= b < s, indexed a·s + b.

#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ffinv/geninv.hpp"

namespace ffinv {

class MetacyclicGroup {
 public:
  /// Checks the presentation constraints u <= m, t <= m, u^s ≡ 1 (mod t),
  /// ut ≡ t (mod m), then the group axioms on the full multiplication table.
  MetacyclicGroup(std::int64_t m, std::int64_t s, std::int64_t t, std::int64_t u) : m_(m), s_(s), t_(t), u_(u) {
    if (m < 1 || s < 1 || t < 1 || u < 1) throw InvalidPresentation("m, s, t, u must be positive");
    if (u > m || t > m) throw InvalidPresentation("presentation requires u <= m and t <= m");
    if (powmod(u, s, t) != 1 % t) throw InvalidPresentation("presentation requires u^s = 1 mod t");
    if ((u * t) % m != t % m) throw InvalidPresentation("presentation requires u*t = t mod m");
    const std::int64_t uinv = inverse_mod(u % m, m);
    if (uinv < 0) throw InvalidPresentation("u must be invertible modulo m");
    // Conjugation: τ^b σ^c = σ^{c·u^{-b}} τ^b.
    conj_.resize(static_cast<std::size_t>(s));
    conj_[0] = 1 % m;
    for (std::size_t b = 1; b < conj_.size(); ++b) conj_[b] = (conj_[b - 1] * uinv) % m;
    build_table();
    verify_axioms();
  }

  std::int64_t m() const noexcept { return m_; }
  std::int64_t s() const noexcept { return s_; }
  std::int64_t t() const noexcept { return t_; }
  std::int64_t u() const noexcept { return u_; }
  std::size_t order() const noexcept { return static_cast<std::size_t>(m_ * s_); }

  std::size_t index(std::int64_t a, std::int64_t b) const {
    return static_cast<std::size_t>(mod(a, m_) * s_ + b);
  }

  std::size_t multiply(std::size_t i, std::size_t j) const { return table_[i * order() + j]; }
  std::size_t inverse(std::size_t i) const { return inverse_[i]; }
  std::size_t identity() const noexcept { return 0; }

  /// Index of g_i⁻¹ g_j.
  std::size_t quotient_index(std::size_t i, std::size_t j) const { return multiply(inverse(i), j); }

 private:
  static std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

  static std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
      if (e & 1) r = (r * b) % m;
      b = (b * b) % m;
      e >>= 1;
    }
    return r;
  }

  static std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t t0 = 0, t1 = 1, r0 = m, r1 = a;
    while (r1 != 0) {
      const std::int64_t q = r0 / r1;
      std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    }
    return r0 == 1 ? mod(t0, m) : -1;
  }

  std::size_t normal_product(std::size_t i, std::size_t j) const {
    const auto s = static_cast<std::size_t>(s_);
    const auto a = static_cast<std::int64_t>(i / s), b = static_cast<std::int64_t>(i % s);
    const auto c = static_cast<std::int64_t>(j / s), d = static_cast<std::int64_t>(j % s);
    std::int64_t e = a + c * conj_[static_cast<std::size_t>(b)];
    std::int64_t f = b + d;
    if (f >= s_) {
      f -= s_;
      e += t_;
    }
    return index(e, f);
  }

  void build_table() {
    const std::size_t n = order();
    table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = normal_product(i, j);
    }
  }

  void verify_axioms() {
    const std::size_t n = order();
    inverse_.assign(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (multiply(0, i) != i || multiply(i, 0) != i) throw InvalidPresentation("identity axiom fails");
      for (std::size_t j = 0; j < n; ++j) {
        if (multiply(i, j) == 0) {
          if (multiply(j, i) != 0) throw InvalidPresentation("left and right inverses differ");
          inverse_[i] = j;
        }
      }
      if (inverse_[i] == n) throw InvalidPresentation("element without inverse");
    }
    // Latin square rows/columns and associativity; exhaustive below 10^7 triples.
    const std::size_t stride = n * n * n <= 10'000'000 ? 1 : n / 97 + 1;
    for (std::size_t i = 0; i < n; i += stride) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (multiply(multiply(i, j), k) != multiply(i, multiply(j, k))) {
            throw InvalidPresentation("multiplication is not associative for these parameters");
          }
        }
      }
    }
    // Relations of the presentation.
    const std::size_t sigma = index(1, 0);
    const std::size_t tau = s_ > 1 ? index(0, 1) : index(t_, 0);
    auto power = [&](std::size_t g, std::int64_t e) {
      std::size_t r = 0;
      for (std::int64_t k = 0; k < e; ++k) r = multiply(r, g);
      return r;
    };
    if (power(sigma, m_) != 0) throw InvalidPresentation("sigma^m != 1");
    if (power(tau, s_) != power(sigma, t_)) throw InvalidPresentation("tau^s != sigma^t");
    if (multiply(multiply(inverse(tau), sigma), tau) != power(sigma, u_)) {
      throw InvalidPresentation("tau^-1 sigma tau != sigma^u");
    }
  }

  std::int64_t m_, s_, t_, u_;
  std::vector<std::int64_t> conj_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
};

/// Index of g_i⁻¹·g_j.
inline std::size_t group_multiplication_index(const MetacyclicGroup& g, std::size_t i, std::size_t j) {
  return g.quotient_index(i, j);
}

/// Coefficients β_g, one per group element index.
using GroupRingElement = std::vector<residue>;

/// Ring product in F[G].
inline GroupRingElement ring_multiply(const MetacyclicGroup& g, const PrimeField& f, const GroupRingElement& x,
                                      const GroupRingElement& y) {
  const std::size_t n = g.order();
  if (x.size() != n || y.size() != n) throw DimensionMismatch("group ring element has wrong length");
  GroupRingElement out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = g.multiply(i, j);
      out[k] = f.add(out[k], f.mul(x[i], y[j]));
    }
  }
  return out;
}

/// M_β(i, j) = β_{g_i⁻¹ g_j}; row i holds the coefficients of g_i·β.
inline DenseMatrix right_multiplication_matrix(const MetacyclicGroup& g, const PrimeField& f,
                                               const GroupRingElement& beta) {
  const std::size_t n = g.order();
  if (beta.size() != n) throw DimensionMismatch("group ring element has wrong length");
  DenseMatrix mb(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mb.set(i, j, f.reduce(beta[g.quotient_index(i, j)]));
  }
  return mb;
}

/// True when blocks of size bs are constant along block diagonals.
inline bool is_block_toeplitz(const DenseMatrix& a, std::size_t bs) {
  if (bs == 0 || a.rows() % bs != 0 || !a.square()) return false;
  const std::size_t n = a.rows();
  for (std::size_t i = bs; i < n; ++i) {
    for (std::size_t j = bs; j < n; ++j) {
      if (a.at(i, j) != a.at(i - bs, j - bs)) return false;
    }
  }
  return true;
}

struct UnitResult {
  GroupRingElement inverse;
  DenseMatrix orbit;  // row i = g_i·β⁻¹
  std::size_t block_size = 0;
  bool swapped = false;        // τ-major element order with m×m blocks
  bool used_fallback = false;  // Schur recursion gave way to the dense oracle
};

namespace detail {

/// Element order σ^a τ^b -> position b·m + a.
inline std::vector<std::size_t> tau_major(const MetacyclicGroup& g) {
  const auto m = static_cast<std::size_t>(g.m()), s = static_cast<std::size_t>(g.s());
  std::vector<std::size_t> pos(m * s);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < s; ++b) pos[a * s + b] = b * m + a;
  }
  return pos;
}

inline DenseMatrix permute_sym(const DenseMatrix& a, const std::vector<std::size_t>& pos) {
  DenseMatrix out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(pos[i], pos[j], a.at(i, j));
  }
  return out;
}

inline DenseMatrix unpermute_sym(const DenseMatrix& a, const std::vector<std::size_t>& pos) {
  DenseMatrix out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.at(pos[i], pos[j]));
  }
  return out;
}

}  // namespace detail

/// Inverse of β and its orbit {g·β⁻¹}, by structured inversion of M_β.
/// Throws NotAUnit when M_β is singular.
inline UnitResult group_ring_unit(const MetacyclicGroup& g, const PrimeField& f, const GroupRingElement& beta,
                                  GeneratorStrategy strategy = GeneratorStrategy::SchurRecursive) {
  const DenseMatrix mb = right_multiplication_matrix(g, f, beta);
  const std::size_t n = g.order();
  const auto m = static_cast<std::size_t>(g.m()), s = static_cast<std::size_t>(g.s());

  UnitResult res{{}, DenseMatrix(f, 0, 0), s, false, false};
  DenseMatrix work = mb;
  std::vector<std::size_t> pos;
  if (m < s) {
    pos = detail::tau_major(g);
    DenseMatrix swapped = detail::permute_sym(mb, pos);
    if (is_block_toeplitz(swapped, m)) {
      work = std::move(swapped);
      res.block_size = m;
      res.swapped = true;
    } else {
      pos.clear();
    }
  }
  const std::size_t bs = res.block_size;
  DenseMatrix inv(f, 0, 0);
  try {
    try {
      inv = block_struct_inv(work, bs, n / bs, OperatorKind::Toeplitz, strategy);
    } catch (const NotStronglyRegular&) {
      res.used_fallback = true;
      inv = block_struct_inv(work, bs, n / bs, OperatorKind::Toeplitz, GeneratorStrategy::DenseOracle);
    }
  } catch (const SingularMatrix&) {
    throw NotAUnit();
  }
  if (res.swapped) inv = detail::unpermute_sym(inv, pos);
  res.inverse.assign(inv.row(g.identity()), inv.row(g.identity()) + n);
  res.orbit = std::move(inv);
  return res;
}

inline bool is_unit(const MetacyclicGroup& g, const PrimeField& f, const GroupRingElement& beta) {
  try {
    (void)group_ring_unit(g, f, beta, GeneratorStrategy::DenseOracle);
    return true;
  } catch (const NotAUnit&) {
    return false;
  }
}

}  // namespace ffinv
