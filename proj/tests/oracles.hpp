#pragma once

// Reference implementations for the tests. They share nothing with the
// library except the DenseMatrix container they convert from and to: plain
// integer matrices, schoolbook products and a textbook elimination.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "ffinv/matrix.hpp"

namespace oracle {

using Int = std::int64_t;
using Mat = std::vector<std::vector<Int>>;

inline Int md(__int128 a, Int p) {
  auto r = static_cast<Int>(a % p);
  return r < 0 ? r + p : r;
}

inline Int pw(Int b, Int e, Int p) {
  Int r = 1 % p;
  b = md(b, p);
  while (e > 0) {
    if (e & 1) r = md(static_cast<__int128>(r) * b, p);
    b = md(static_cast<__int128>(b) * b, p);
    e >>= 1;
  }
  return r;
}

/// Fermat inverse.
inline Int inv(Int a, Int p) { return pw(a, p - 2, p); }

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<Int>(c, 0)); }

inline Mat eye(std::size_t n) {
  Mat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b, Int p) {
  const std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  Mat out = zeros(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      __int128 acc = 0;
      for (std::size_t l = 0; l < k; ++l) acc += static_cast<__int128>(a[i][l]) * b[l][j];
      out[i][j] = md(acc, p);
    }
  }
  return out;
}

inline Mat add(const Mat& a, const Mat& b, Int p) {
  Mat out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = md(a[i][j] + b[i][j], p);
  }
  return out;
}

inline Mat sub(const Mat& a, const Mat& b, Int p) {
  Mat out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = md(a[i][j] - b[i][j], p);
  }
  return out;
}

inline Mat transpose(const Mat& a) {
  if (a.empty()) return a;
  Mat t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

inline Mat from(const ffinv::DenseMatrix& d) {
  Mat m = zeros(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) m[i][j] = static_cast<Int>(d.at(i, j));
  }
  return m;
}

inline ffinv::DenseMatrix to(const ffinv::PrimeField& f, const Mat& m) {
  const std::size_t c = m.empty() ? 0 : m[0].size();
  ffinv::DenseMatrix d(f, m.size(), c);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < c; ++j) d.set(i, j, f.from_int(m[i][j]));
  }
  return d;
}

/// Rank by forward elimination.
inline std::size_t rank(Mat a, Int p) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && md(a[piv][c], p) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Int iv = inv(a[r][c], p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Int fct = md(static_cast<__int128>(a[i][c]) * iv, p);
      if (fct == 0) continue;
      for (std::size_t j = c; j < cols; ++j) a[i][j] = md(a[i][j] - static_cast<__int128>(fct) * a[r][j], p);
    }
    ++r;
  }
  return r;
}

/// Inverse by elimination on [A | I]; empty result when singular.
inline Mat inverse(const Mat& a, Int p) {
  const std::size_t n = a.size();
  Mat w = zeros(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i][j] = md(a[i][j], p);
    w[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && w[piv][c] == 0) ++piv;
    if (piv == n) return {};
    std::swap(w[piv], w[c]);
    const Int iv = inv(w[c][c], p);
    for (auto& x : w[c]) x = md(static_cast<__int128>(x) * iv, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || w[i][c] == 0) continue;
      const Int fct = w[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) w[i][j] = md(w[i][j] - static_cast<__int128>(fct) * w[c][j], p);
    }
  }
  Mat out = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = w[i][n + j];
  }
  return out;
}

/// Determinant by the Leibniz formula; only for small n.
inline Int leibniz_det(const Mat& a, Int p) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Int total = 0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    Int term = 1;
    for (std::size_t i = 0; i < n; ++i) term = md(static_cast<__int128>(term) * a[i][perm[i]], p);
    total = md(total + (inversions % 2 ? -term : term), p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Single down-shift by k positions: ones at (i, i-k).
inline Mat down_shift(std::size_t n, std::size_t k) {
  Mat z = zeros(n, n);
  for (std::size_t i = k; i < n; ++i) z[i][i - k] = 1;
  return z;
}

/// Every n×n matrix over GF(p) satisfying pred; p^(n²) candidates.
inline std::vector<Mat> brute_force(std::size_t n, Int p, const std::function<bool(const Mat&)>& pred) {
  std::vector<Mat> hits;
  const std::size_t cells = n * n;
  std::vector<Int> digits(cells, 0);
  while (true) {
    Mat m = zeros(n, n);
    for (std::size_t c = 0; c < cells; ++c) m[c / n][c % n] = digits[c];
    if (pred(m)) hits.push_back(m);
    std::size_t c = 0;
    while (c < cells && ++digits[c] == p) digits[c++] = 0;
    if (c == cells) break;
  }
  return hits;
}

}  // namespace oracle
