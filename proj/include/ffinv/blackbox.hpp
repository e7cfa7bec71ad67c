#pragma once

// Matrices known only through their action on blocks of vectors.

#include <concepts>
#include <cstddef>
#include <vector>

#include "ffinv/matrix.hpp"

namespace ffinv {

template <class B>
concept BlackBox = requires(const B& b, const DenseMatrix& x) {
  { b.rows() } -> std::convertible_to<std::size_t>;
  { b.cols() } -> std::convertible_to<std::size_t>;
  { b.field() } -> std::convertible_to<const PrimeField&>;
  { b.apply(x) } -> std::same_as<DenseMatrix>;
  { b.apply_transpose(x) } -> std::same_as<DenseMatrix>;
};

/// A dense matrix behind the black-box interface.
class DenseOperator {
 public:
  explicit DenseOperator(DenseMatrix a) : a_(std::move(a)) {}
  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const PrimeField& field() const noexcept { return a_.field(); }
  DenseMatrix apply(const DenseMatrix& x) const { return mat_mul(a_, x); }
  DenseMatrix apply_transpose(const DenseMatrix& x) const { return mat_mul(a_.transpose(), x); }
  const DenseMatrix& matrix() const noexcept { return a_; }

 private:
  DenseMatrix a_;
};

/// diag(d)·x, row scaling.
inline DenseMatrix scale_rows(const std::vector<residue>& d, const DenseMatrix& x) {
  if (d.size() != x.rows()) throw DimensionMismatch("scale_rows: length mismatch");
  DenseMatrix out = x;
  const auto& f = x.field();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    residue* r = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) r[j] = f.mul_uncounted(r[j], d[i]);
  }
  count_muls(x.rows() * x.cols());
  return out;
}

/// x·diag(d), column scaling.
inline DenseMatrix scale_cols(const DenseMatrix& x, const std::vector<residue>& d) {
  if (d.size() != x.cols()) throw DimensionMismatch("scale_cols: length mismatch");
  DenseMatrix out = x;
  const auto& f = x.field();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    residue* r = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) r[j] = f.mul_uncounted(r[j], d[j]);
  }
  count_muls(x.rows() * x.cols());
  return out;
}

/// D·A·D for a diagonal D, applied as two scalings around A.
template <BlackBox B>
class DiagonalSandwich {
 public:
  DiagonalSandwich(const B& a, std::vector<residue> d) : a_(a), d_(std::move(d)) {
    if (d_.size() != a.rows() || a.rows() != a.cols()) throw DimensionMismatch("DAD needs a square matrix");
  }
  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  const PrimeField& field() const noexcept { return a_.field(); }
  DenseMatrix apply(const DenseMatrix& x) const { return scale_rows(d_, a_.apply(scale_rows(d_, x))); }
  DenseMatrix apply_transpose(const DenseMatrix& x) const {
    return scale_rows(d_, a_.apply_transpose(scale_rows(d_, x)));
  }
  const std::vector<residue>& diagonal() const noexcept { return d_; }

 private:
  const B& a_;
  std::vector<residue> d_;
};

/// Leading r×r principal submatrix of a square black box.
template <BlackBox B>
class LeadingMinor {
 public:
  LeadingMinor(const B& a, std::size_t r) : a_(a), r_(r) {
    if (r > a.rows() || r > a.cols()) throw DimensionMismatch("leading minor larger than matrix");
  }
  std::size_t rows() const noexcept { return r_; }
  std::size_t cols() const noexcept { return r_; }
  const PrimeField& field() const noexcept { return a_.field(); }
  DenseMatrix apply(const DenseMatrix& x) const { return restrict(a_.apply(pad(x, a_.cols()))); }
  DenseMatrix apply_transpose(const DenseMatrix& x) const {
    return restrict(a_.apply_transpose(pad(x, a_.rows())));
  }

 private:
  DenseMatrix pad(const DenseMatrix& x, std::size_t n) const {
    if (x.rows() != r_) throw DimensionMismatch("leading minor: operand has wrong height");
    DenseMatrix out(x.field(), n, x.cols());
    out.set_block(0, 0, x);
    return out;
  }
  DenseMatrix restrict(const DenseMatrix& y) const { return y.rows_range(0, r_); }

  const B& a_;
  std::size_t r_;
};

/// Materializes a black box by applying it to the identity.
template <BlackBox B>
DenseMatrix densify(const B& b) {
  return b.apply(DenseMatrix::identity(b.field(), b.cols()));
}

}  // namespace ffinv
