#pragma once

// Arithmetic in GF(p) for word-sized primes, the field-operation counter, and
// the seeded random generator threaded through every probabilistic routine.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

#include "ffinv/error.hpp"

namespace ffinv {

using residue = std::uint64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Operation counting
// ---------------------------------------------------------------------------

/// Field-operation tallies. Inversions also count as one multiplication.
struct OpCounter {
  std::uint64_t muls = 0;
  std::uint64_t adds = 0;
  std::uint64_t invs = 0;

  void reset() noexcept { *this = OpCounter{}; }

  OpCounter& operator+=(const OpCounter& o) noexcept {
    muls += o.muls;
    adds += o.adds;
    invs += o.invs;
    return *this;
  }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

namespace detail {
inline thread_local OpCounter* active_counter = nullptr;
}  // namespace detail

/// Routes field operations performed on this thread into `counter` until the
/// scope ends. Scopes nest: on exit the inner totals are folded into the outer
/// counter, so an enclosing measurement still sees everything.
class CounterScope {
 public:
  explicit CounterScope(OpCounter& counter) noexcept
      : counter_(counter), previous_(detail::active_counter) {
    detail::active_counter = &counter_;
  }
  ~CounterScope() {
    detail::active_counter = previous_;
    if (previous_ != nullptr) *previous_ += counter_;
  }
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;

 private:
  OpCounter& counter_;
  OpCounter* previous_;
};

inline void count_muls(std::uint64_t k) noexcept {
  if (auto* c = detail::active_counter) c->muls += k;
}
inline void count_adds(std::uint64_t k) noexcept {
  if (auto* c = detail::active_counter) c->adds += k;
}
inline void count_invs(std::uint64_t k) noexcept {
  if (auto* c = detail::active_counter) {
    c->invs += k;
    c->muls += k;
  }
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

inline std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1U;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all 64-bit n.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto b : bases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (auto a : bases) {
    std::uint64_t x = detail::powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PrimeField
// ---------------------------------------------------------------------------

/// GF(p) with a runtime modulus, 2 <= p < 2^62. Residues are canonical in [0, p).
///
/// `add`, `sub`, `mul`, ... report to the active OpCounter. The `*_uncounted`
/// variants exist for kernels that tally their work in bulk.
class PrimeField {
 public:
  static constexpr std::uint64_t max_modulus = std::uint64_t{1} << 62U;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= max_modulus) throw UsageError("modulus must be below 2^62");
    if (!is_prime(p)) throw UsageError("modulus " + std::to_string(p) + " is not prime");
    if (p < (std::uint64_t{1} << 32U)) barrett_ = std::numeric_limits<std::uint64_t>::max() / p;
  }

  std::uint64_t modulus() const noexcept { return p_; }
  bool small() const noexcept { return barrett_ != 0; }

  residue reduce(std::uint64_t x) const noexcept { return x % p_; }

  /// Maps any signed integer onto its canonical residue.
  residue from_int(std::int64_t x) const noexcept {
    auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = x % m;
    return static_cast<residue>(r < 0 ? r + m : r);
  }

  residue add_uncounted(residue a, residue b) const noexcept {
    residue r = a + b;
    return r >= p_ ? r - p_ : r;
  }
  residue sub_uncounted(residue a, residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  residue neg_uncounted(residue a) const noexcept { return a == 0 ? 0 : p_ - a; }

  residue mul_uncounted(residue a, residue b) const noexcept {
    if (barrett_ != 0) return reduce_small(a * b);
    return static_cast<residue>((static_cast<u128>(a) * b) % p_);
  }

  /// Reduces a 128-bit accumulator (used by lazy dot products).
  residue reduce_wide(u128 x) const noexcept { return static_cast<residue>(x % p_); }

  residue add(residue a, residue b) const noexcept {
    count_adds(1);
    return add_uncounted(a, b);
  }
  residue sub(residue a, residue b) const noexcept {
    count_adds(1);
    return sub_uncounted(a, b);
  }
  residue neg(residue a) const noexcept {
    count_adds(1);
    return neg_uncounted(a);
  }
  residue mul(residue a, residue b) const noexcept {
    count_muls(1);
    return mul_uncounted(a, b);
  }

  /// Extended Euclid. Throws DivisionByZero for a = 0.
  residue inv(residue a) const {
    if (a == 0) throw DivisionByZero();
    count_invs(1);
    return inv_uncounted(a);
  }

  residue inv_uncounted(residue a) const {
    if (a == 0) throw DivisionByZero();
    std::int64_t t = 0, new_t = 1;
    auto r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return from_int(t);
  }

  residue pow(residue a, std::uint64_t e) const noexcept {
    residue r = 1 % p_;
    while (e != 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) noexcept {
    return a.p_ == b.p_;
  }

 private:
  // Barrett reduction for x < 2^64 when p < 2^32.
  residue reduce_small(std::uint64_t x) const noexcept {
    auto q = static_cast<std::uint64_t>((static_cast<u128>(x) * barrett_) >> 64U);
    std::uint64_t r = x - q * p_;
    while (r >= p_) r -= p_;
    return r;
  }

  std::uint64_t p_;
  std::uint64_t barrett_ = 0;
};

inline void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) throw FieldMismatch();
}

/// Lazy dot-product accumulator: sums products in 128 bits and reduces rarely.
class Accumulator {
 public:
  explicit Accumulator(const PrimeField& f) noexcept
      : f_(f), limit_(f.small() ? std::numeric_limits<int>::max() : 8) {}

  void add_product(residue a, residue b) noexcept {
    acc_ += static_cast<u128>(a) * b;
    if (++pending_ == limit_) {
      acc_ = f_.reduce_wide(acc_);
      pending_ = 0;
    }
  }
  void add(residue a) noexcept { acc_ += a; }
  residue value() const noexcept { return f_.reduce_wide(acc_); }

 private:
  const PrimeField& f_;
  int limit_;
  int pending_ = 0;
  u128 acc_ = 0;
};

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// A residue bound to its field. Mixing fields throws FieldMismatch.
class FieldElement {
 public:
  FieldElement(PrimeField f, std::int64_t v) : field_(f), value_(f.from_int(v)) {}

  static FieldElement from_residue(PrimeField f, residue r) {
    if (r >= f.modulus()) throw UsageError("residue out of range");
    FieldElement e(f, 0);
    e.value_ = r;
    return e;
  }

  const PrimeField& field() const noexcept { return field_; }
  residue value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement inv() const { return make(field_.inv(value_)); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return a.make(a.field_.add(a.value_, b.value_));
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return a.make(a.field_.sub(a.value_, b.value_));
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return a.make(a.field_.mul(a.value_, b.value_));
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return a * b.inv();
  }
  FieldElement operator-() const { return make(field_.neg(value_)); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  FieldElement make(residue r) const { return from_residue(field_, r); }

  PrimeField field_;
  residue value_;
};

inline FieldElement fe_add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement fe_sub(const FieldElement& a, const FieldElement& b) { return a - b; }
inline FieldElement fe_mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement fe_neg(const FieldElement& a) { return -a; }
inline FieldElement fe_inv(const FieldElement& a) { return a.inv(); }

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Seeded, splittable generator. Sampling is done by rejection on raw 64-bit
/// draws so sequences do not depend on the standard library's distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw UsageError("empty sampling range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Independent child stream; advances this generator by one draw.
  SeededRng split() { return SeededRng(mix(engine_())); }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline residue random_residue(const PrimeField& f, SeededRng& rng) { return rng.below(f.modulus()); }

inline residue random_nonzero_residue(const PrimeField& f, SeededRng& rng) {
  residue r = 0;
  do {
    r = rng.below(f.modulus());
  } while (r == 0);
  return r;
}

inline FieldElement fe_rand(const PrimeField& f, SeededRng& rng) {
  return FieldElement::from_residue(f, random_residue(f, rng));
}

inline FieldElement fe_rand_nonzero(const PrimeField& f, SeededRng& rng) {
  return FieldElement::from_residue(f, random_nonzero_residue(f, rng));
}

}  // namespace ffinv
