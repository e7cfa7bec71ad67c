#pragma once

// Dense and sparse matrices over GF(p), multiplication kernels and
// Gauss-Jordan elimination. Every kernel reports its field operations to the
// active OpCounter in bulk, with the counts a schoolbook evaluation would make.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ffinv/error.hpp"
#include "ffinv/field.hpp"

namespace ffinv {

// ---------------------------------------------------------------------------
// Threading
// ---------------------------------------------------------------------------

namespace detail {
inline std::atomic<int> thread_count{1};
}  // namespace detail

/// Worker threads used by the dense kernels. Results never depend on it.
inline void set_num_threads(int n) { detail::thread_count.store(n < 1 ? 1 : n); }
inline int num_threads() { return detail::thread_count.load(); }

namespace detail {

// Runs body(lo, hi) over row bands of [0, rows).
inline void parallel_rows(std::size_t rows, std::size_t work_per_row,
                          const std::function<void(std::size_t, std::size_t)>& body) {
  const auto t = static_cast<std::size_t>(num_threads());
  if (t <= 1 || rows < 2 * t || rows * work_per_row < (std::size_t{1} << 16U)) {
    body(0, rows);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t band = (rows + t - 1) / t;
  for (std::size_t lo = 0; lo < rows; lo += band) {
    pool.emplace_back(body, lo, std::min(rows, lo + band));
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

/// Row-major dense matrix with canonical residues.
class DenseMatrix {
 public:
  DenseMatrix(PrimeField f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static DenseMatrix identity(PrimeField f, std::size_t n) {
    DenseMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1 % f.modulus();
    return m;
  }

  /// Builds from signed integers, reducing each entry.
  static DenseMatrix from_rows(PrimeField f,
                               std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(f, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionMismatch("ragged row list");
      std::size_t j = 0;
      for (auto v : row) m.set(i, j++, f.from_int(v));
      ++i;
    }
    return m;
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  residue at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  residue& ref(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, residue v) { data_[i * cols_ + j] = v; }

  const residue* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
  residue* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
  const std::vector<residue>& data() const noexcept { return data_; }
  std::vector<residue>& data() noexcept { return data_; }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
    DenseMatrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
      std::copy_n(row(r0 + i) + c0, nc, b.row(i));
    }
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i) {
      std::copy_n(b.row(i), b.cols_, row(r0 + i) + c0);
    }
  }

  DenseMatrix rows_range(std::size_t r0, std::size_t nr) const { return block(r0, 0, nr, cols_); }
  DenseMatrix cols_range(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }

  DenseMatrix transpose() const {
    DenseMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
    }
    return t;
  }

  bool is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](residue v) { return v == 0; });
  }
  bool is_identity() const noexcept {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (at(i, j) != (i == j ? 1U : 0U)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) noexcept {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<residue> data_;
};

inline DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_field(a.field(), b.field());
  if (a.rows() != b.rows()) throw DimensionMismatch("hcat: row counts differ");
  DenseMatrix r(a.field(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

inline DenseMatrix vcat(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.cols()) throw DimensionMismatch("vcat: column counts differ");
  DenseMatrix r(a.field(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

// ---------------------------------------------------------------------------
// Elementwise kernels
// ---------------------------------------------------------------------------

namespace detail {

inline void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  require_same_field(a.field(), b.field());
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shapes differ");
  }
}

/// Sum of a[i]*b[i*stride] reduced once per safe chunk.
inline residue dot(const PrimeField& f, const residue* a, const residue* b, std::size_t len,
                   std::size_t stride = 1) {
  const std::uint64_t p = f.modulus();
  if (f.small()) {
    const std::uint64_t sq = (p - 1) * (p - 1);
    const std::uint64_t chunk = sq == 0 ? len + 1 : ~std::uint64_t{0} / sq;
    std::uint64_t total = 0;
    std::uint64_t acc = 0;
    std::uint64_t pending = 0;
    for (std::size_t i = 0; i < len; ++i) {
      acc += a[i] * b[i * stride];
      if (++pending == chunk) {
        total = (total + acc % p) % p;
        acc = 0;
        pending = 0;
      }
    }
    return (total + acc % p) % p;
  }
  u128 acc = 0;
  residue total = 0;
  int pending = 0;
  for (std::size_t i = 0; i < len; ++i) {
    acc += static_cast<u128>(a[i]) * b[i * stride];
    if (++pending == 8) {
      total = f.add_uncounted(total, f.reduce_wide(acc));
      acc = 0;
      pending = 0;
    }
  }
  return f.add_uncounted(total, f.reduce_wide(acc));
}

inline void count_product(std::size_t r, std::size_t c, std::size_t k) {
  count_muls(static_cast<std::uint64_t>(r) * c * k);
  if (k > 0) count_adds(static_cast<std::uint64_t>(r) * c * (k - 1));
}

}  // namespace detail

inline DenseMatrix mat_add(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_same_shape(a, b, "mat_add");
  DenseMatrix r(a.field(), a.rows(), a.cols());
  const auto& f = a.field();
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    r.data()[i] = f.add_uncounted(a.data()[i], b.data()[i]);
  }
  count_adds(a.data().size());
  return r;
}

inline DenseMatrix mat_sub(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_same_shape(a, b, "mat_sub");
  DenseMatrix r(a.field(), a.rows(), a.cols());
  const auto& f = a.field();
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    r.data()[i] = f.sub_uncounted(a.data()[i], b.data()[i]);
  }
  count_adds(a.data().size());
  return r;
}

inline void mat_add_inplace(DenseMatrix& a, const DenseMatrix& b) {
  detail::require_same_shape(a, b, "mat_add_inplace");
  const auto& f = a.field();
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    a.data()[i] = f.add_uncounted(a.data()[i], b.data()[i]);
  }
  count_adds(a.data().size());
}

inline DenseMatrix mat_neg(const DenseMatrix& a) {
  DenseMatrix r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) r.data()[i] = a.field().neg_uncounted(a.data()[i]);
  count_adds(a.data().size());
  return r;
}

inline DenseMatrix mat_scale(const DenseMatrix& a, residue c) {
  DenseMatrix r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) r.data()[i] = a.field().mul_uncounted(a.data()[i], c);
  count_muls(a.data().size());
  return r;
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Schoolbook product; counts r*c*k multiplications and r*c*(k-1) additions.
inline DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const std::size_t r = a.rows(), c = b.cols(), k = a.cols();
  DenseMatrix out(a.field(), r, c);
  const DenseMatrix bt = b.transpose();
  const auto& f = a.field();
  detail::parallel_rows(r, c * k, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const residue* ar = a.row(i);
      residue* orow = out.row(i);
      for (std::size_t j = 0; j < c; ++j) orow[j] = detail::dot(f, ar, bt.row(j), k);
    }
  });
  detail::count_product(r, c, k);
  return out;
}

/// a * bᵀ without materializing the transpose.
inline DenseMatrix mat_mul_abt(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.cols()) throw DimensionMismatch("mat_mul_abt: inner dimensions differ");
  const std::size_t r = a.rows(), c = b.rows(), k = a.cols();
  DenseMatrix out(a.field(), r, c);
  const auto& f = a.field();
  detail::parallel_rows(r, c * k, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < c; ++j) out.ref(i, j) = detail::dot(f, a.row(i), b.row(j), k);
    }
  });
  detail::count_product(r, c, k);
  return out;
}

/// Strassen recursion with zero padding to even sizes; falls back to mat_mul
/// once any dimension is at most `cutoff`.
inline DenseMatrix mat_mul_strassen(const DenseMatrix& a, const DenseMatrix& b, std::size_t cutoff) {
  require_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) throw DimensionMismatch("mat_mul_strassen: inner dimensions differ");
  if (cutoff == 0) throw UsageError("Strassen cutoff must be positive");
  const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
  if (std::min({r, k, c}) <= cutoff) return mat_mul(a, b);

  const std::size_t r2 = (r + 1) / 2, k2 = (k + 1) / 2, c2 = (c + 1) / 2;
  const auto& f = a.field();
  auto quad = [&](const DenseMatrix& m, std::size_t bi, std::size_t bj, std::size_t h, std::size_t w) {
    DenseMatrix q(f, h, w);
    for (std::size_t i = 0; i < h; ++i) {
      const std::size_t si = bi * h + i;
      if (si >= m.rows()) break;
      for (std::size_t j = 0; j < w; ++j) {
        const std::size_t sj = bj * w + j;
        if (sj < m.cols()) q.set(i, j, m.at(si, sj));
      }
    }
    return q;
  };
  const DenseMatrix a11 = quad(a, 0, 0, r2, k2), a12 = quad(a, 0, 1, r2, k2);
  const DenseMatrix a21 = quad(a, 1, 0, r2, k2), a22 = quad(a, 1, 1, r2, k2);
  const DenseMatrix b11 = quad(b, 0, 0, k2, c2), b12 = quad(b, 0, 1, k2, c2);
  const DenseMatrix b21 = quad(b, 1, 0, k2, c2), b22 = quad(b, 1, 1, k2, c2);

  const DenseMatrix m1 = mat_mul_strassen(mat_add(a11, a22), mat_add(b11, b22), cutoff);
  const DenseMatrix m2 = mat_mul_strassen(mat_add(a21, a22), b11, cutoff);
  const DenseMatrix m3 = mat_mul_strassen(a11, mat_sub(b12, b22), cutoff);
  const DenseMatrix m4 = mat_mul_strassen(a22, mat_sub(b21, b11), cutoff);
  const DenseMatrix m5 = mat_mul_strassen(mat_add(a11, a12), b22, cutoff);
  const DenseMatrix m6 = mat_mul_strassen(mat_sub(a21, a11), mat_add(b11, b12), cutoff);
  const DenseMatrix m7 = mat_mul_strassen(mat_sub(a12, a22), mat_add(b21, b22), cutoff);

  const DenseMatrix c11 = mat_add(mat_sub(mat_add(m1, m4), m5), m7);
  const DenseMatrix c12 = mat_add(m3, m5);
  const DenseMatrix c21 = mat_add(m2, m4);
  const DenseMatrix c22 = mat_add(mat_add(mat_sub(m1, m2), m3), m6);

  DenseMatrix out(f, r, c);
  auto place = [&](const DenseMatrix& q, std::size_t bi, std::size_t bj) {
    for (std::size_t i = 0; i < r2 && bi * r2 + i < r; ++i) {
      for (std::size_t j = 0; j < c2 && bj * c2 + j < c; ++j) out.set(bi * r2 + i, bj * c2 + j, q.at(i, j));
    }
  };
  place(c11, 0, 0);
  place(c12, 0, 1);
  place(c21, 1, 0);
  place(c22, 1, 1);
  return out;
}

// ---------------------------------------------------------------------------
// BlockView
// ---------------------------------------------------------------------------

/// An n×w matrix seen as a grid of s×s blocks; n and w must be multiples of s.
class BlockView {
 public:
  BlockView(const DenseMatrix& base, std::size_t s) : base_(&base), s_(s) {
    if (s == 0 || base.rows() % s != 0 || base.cols() % s != 0) {
      throw DimensionMismatch("block size " + std::to_string(s) + " does not divide " +
                              std::to_string(base.rows()) + "x" + std::to_string(base.cols()));
    }
  }

  std::size_t s() const noexcept { return s_; }
  std::size_t block_rows() const noexcept { return base_->rows() / s_; }
  std::size_t block_cols() const noexcept { return base_->cols() / s_; }
  const DenseMatrix& base() const noexcept { return *base_; }

  DenseMatrix get(std::size_t i, std::size_t j) const { return base_->block(i * s_, j * s_, s_, s_); }

  /// All blocks in row-major block order.
  std::vector<DenseMatrix> gather() const {
    std::vector<DenseMatrix> out;
    out.reserve(block_rows() * block_cols());
    for (std::size_t i = 0; i < block_rows(); ++i) {
      for (std::size_t j = 0; j < block_cols(); ++j) out.push_back(get(i, j));
    }
    return out;
  }

  /// Inverse of gather for a grid of the given shape.
  static DenseMatrix scatter(const std::vector<DenseMatrix>& blocks, std::size_t block_rows,
                             std::size_t block_cols) {
    if (blocks.empty() || blocks.size() != block_rows * block_cols) {
      throw DimensionMismatch("scatter: block count does not match grid");
    }
    const std::size_t s = blocks.front().rows();
    DenseMatrix out(blocks.front().field(), block_rows * s, block_cols * s);
    for (std::size_t i = 0; i < block_rows; ++i) {
      for (std::size_t j = 0; j < block_cols; ++j) {
        const auto& b = blocks[i * block_cols + j];
        if (b.rows() != s || b.cols() != s) throw DimensionMismatch("scatter: inconsistent block size");
        out.set_block(i * s, j * s, b);
      }
    }
    return out;
  }

 private:
  const DenseMatrix* base_;
  std::size_t s_;
};

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

namespace detail {

// row_a -= c * row_b over [from, len)
inline void axpy_row(const PrimeField& f, residue* row_a, const residue* row_b, residue c,
                     std::size_t from, std::size_t len) {
  for (std::size_t j = from; j < len; ++j) {
    if (row_b[j] != 0) row_a[j] = f.sub_uncounted(row_a[j], f.mul_uncounted(c, row_b[j]));
  }
  count_muls(len - from);
  count_adds(len - from);
}

inline void scale_row(const PrimeField& f, residue* row, residue c, std::size_t from, std::size_t len) {
  for (std::size_t j = from; j < len; ++j) row[j] = f.mul_uncounted(row[j], c);
  count_muls(len - from);
}

}  // namespace detail

/// Reduced row echelon form and its pivot columns.
struct Echelon {
  DenseMatrix rref;
  std::vector<std::size_t> pivots;
};

inline Echelon row_echelon(DenseMatrix a) {
  const auto& f = a.field();
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a.at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(a.row(piv), a.row(piv) + cols, a.row(r));
    const residue inv = f.inv(a.at(r, c));
    detail::scale_row(f, a.row(r), inv, c, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != r && a.at(i, c) != 0) detail::axpy_row(f, a.row(i), a.row(r), a.at(i, c), c, cols);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t dense_rank(const DenseMatrix& a) { return row_echelon(a).pivots.size(); }

/// Basis of the right kernel as columns: a * N = 0, cols(N) = cols(a) - rank.
inline DenseMatrix dense_nullspace(const DenseMatrix& a) {
  const auto& f = a.field();
  const Echelon e = row_echelon(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  DenseMatrix basis(f, n, n - e.pivots.size());
  std::size_t col = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    basis.set(free, col, 1);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
      basis.set(e.pivots[k], col, f.neg_uncounted(e.rref.at(k, free)));
    }
    ++col;
  }
  return basis;
}

/// Gauss-Jordan inverse with first-nonzero pivoting. Throws SingularMatrix.
inline DenseMatrix dense_inverse(const DenseMatrix& a, const std::string& stage = "dense_inverse") {
  if (!a.square()) throw DimensionMismatch("dense_inverse: matrix is not square");
  const auto& f = a.field();
  const std::size_t n = a.rows();
  DenseMatrix work = a;
  DenseMatrix inv = DenseMatrix::identity(f, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && work.at(piv, c) == 0) ++piv;
    if (piv == n) {
      throw SingularMatrix(stage, dense_rank(a));
    }
    if (piv != c) {
      std::swap_ranges(work.row(piv), work.row(piv) + n, work.row(c));
      std::swap_ranges(inv.row(piv), inv.row(piv) + n, inv.row(c));
    }
    const residue pinv = f.inv(work.at(c, c));
    detail::scale_row(f, work.row(c), pinv, c, n);
    detail::scale_row(f, inv.row(c), pinv, 0, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const residue factor = work.at(i, c);
      if (factor == 0) continue;
      detail::axpy_row(f, work.row(i), work.row(c), factor, c, n);
      detail::axpy_row(f, inv.row(i), inv.row(c), factor, 0, n);
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// SparseMatrix
// ---------------------------------------------------------------------------

struct Triplet {
  std::size_t i;
  std::size_t j;
  residue v;
};

/// Row-sorted triplet matrix with per-row offsets; acts as a black box.
class SparseMatrix {
 public:
  SparseMatrix(PrimeField f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Validates, sorts and drops zero values. Duplicate positions are rejected.
  static SparseMatrix from_triplets(PrimeField f, std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries) {
    SparseMatrix m(f, rows, cols);
    for (auto& t : entries) {
      if (t.i >= rows || t.j >= cols) {
        throw DimensionMismatch("triplet (" + std::to_string(t.i) + "," + std::to_string(t.j) +
                                ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      }
      t.v = f.reduce(t.v);
    }
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    for (std::size_t k = 1; k < entries.size(); ++k) {
      if (entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j) {
        throw UsageError("duplicate triplet at (" + std::to_string(entries[k].i) + "," +
                         std::to_string(entries[k].j) + ")");
      }
    }
    std::erase_if(entries, [](const Triplet& t) { return t.v == 0; });
    m.entries_ = std::move(entries);
    for (const auto& t : m.entries_) ++m.row_ptr_[t.i + 1];
    for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    return m;
  }

  static SparseMatrix from_dense(const DenseMatrix& d) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      for (std::size_t j = 0; j < d.cols(); ++j) {
        if (d.at(i, j) != 0) t.push_back({i, j, d.at(i, j)});
      }
    }
    return from_triplets(d.field(), d.rows(), d.cols(), std::move(t));
  }

  static SparseMatrix identity(PrimeField f, std::size_t n) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1});
    return from_triplets(f, n, n, std::move(t));
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const std::vector<Triplet>& triplets() const noexcept { return entries_; }

  DenseMatrix to_dense() const {
    DenseMatrix d(field_, rows_, cols_);
    for (const auto& t : entries_) d.set(t.i, t.j, t.v);
    return d;
  }

  SparseMatrix transpose() const {
    std::vector<Triplet> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_) t.push_back({e.j, e.i, e.v});
    return from_triplets(field_, cols_, rows_, std::move(t));
  }

  /// this * b for an n×k dense block; Θ(nnz·k) operations.
  DenseMatrix apply(const DenseMatrix& b) const {
    require_same_field(field_, b.field());
    if (b.rows() != cols_) throw DimensionMismatch("sparse apply: dimension mismatch");
    const std::size_t k = b.cols();
    DenseMatrix out(field_, rows_, k);
    std::uint64_t adds = 0;
    std::vector<u128> acc(k);
    for (std::size_t i = 0; i < rows_; ++i) {
      const std::size_t lo = row_ptr_[i], hi = row_ptr_[i + 1];
      if (lo == hi) continue;
      adds += (hi - lo - 1) * k;
      std::fill(acc.begin(), acc.end(), 0);
      int pending = 0;
      residue* orow = out.row(i);
      for (std::size_t e = lo; e < hi; ++e) {
        const residue v = entries_[e].v;
        const residue* brow = b.row(entries_[e].j);
        for (std::size_t c = 0; c < k; ++c) acc[c] += static_cast<u128>(v) * brow[c];
        if (++pending == 8) {
          for (std::size_t c = 0; c < k; ++c) acc[c] = field_.reduce_wide(acc[c]);
          pending = 0;
        }
      }
      for (std::size_t c = 0; c < k; ++c) orow[c] = field_.reduce_wide(acc[c]);
    }
    count_muls(static_cast<std::uint64_t>(entries_.size()) * k);
    count_adds(adds);
    return out;
  }

  /// thisᵀ * b.
  DenseMatrix apply_transpose(const DenseMatrix& b) const {
    require_same_field(field_, b.field());
    if (b.rows() != rows_) throw DimensionMismatch("sparse apply_transpose: dimension mismatch");
    const std::size_t k = b.cols();
    DenseMatrix out(field_, cols_, k);
    std::vector<std::size_t> col_count(cols_, 0);
    for (const auto& t : entries_) {
      const residue* brow = b.row(t.i);
      residue* orow = out.row(t.j);
      for (std::size_t c = 0; c < k; ++c) {
        orow[c] = field_.add_uncounted(orow[c], field_.mul_uncounted(t.v, brow[c]));
      }
      ++col_count[t.j];
    }
    std::uint64_t adds = 0;
    for (auto cnt : col_count) {
      if (cnt > 0) adds += (cnt - 1) * k;
    }
    count_muls(static_cast<std::uint64_t>(entries_.size()) * k);
    count_adds(adds);
    return out;
  }

  /// b * this for a k×rows dense block.
  DenseMatrix apply_left(const DenseMatrix& b) const { return apply_transpose(b.transpose()).transpose(); }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) noexcept {
    if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t k = 0; k < a.entries_.size(); ++k) {
      const auto &x = a.entries_[k], &y = b.entries_[k];
      if (x.i != y.i || x.j != y.j || x.v != y.v) return false;
    }
    return true;
  }

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> entries_;
  std::vector<std::size_t> row_ptr_;
};

inline DenseMatrix sparse_matvec(const SparseMatrix& a, const DenseMatrix& x) {
  if (x.cols() != 1) throw DimensionMismatch("sparse_matvec expects a column vector");
  return a.apply(x);
}

inline DenseMatrix sparse_mat_apply(const SparseMatrix& a, const DenseMatrix& b) { return a.apply(b); }

}  // namespace ffinv
