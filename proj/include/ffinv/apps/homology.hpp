#pragma once

// Simplicial homology over GF(p): boundary matrices and Betti numbers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ffinv/rank.hpp"

namespace ffinv {

using Simplex = std::vector<std::int64_t>;

/// Face-closed set of simplices ordered by (dimension, lexicographic).
class SimplicialComplex {
 public:
  /// Sorts vertex lists and removes duplicates. With `close_faces` every face
  /// is added; otherwise a missing face throws NonClosedComplex.
  static SimplicialComplex build(std::vector<Simplex> simplices, bool close_faces = true) {
    std::set<Simplex> all;
    for (auto& s : simplices) {
      if (s.empty()) throw UsageError("empty simplex");
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw UsageError("simplex repeats a vertex");
      all.insert(s);
    }
    if (close_faces) {
      std::vector<Simplex> stack(all.begin(), all.end());
      while (!stack.empty()) {
        Simplex s = std::move(stack.back());
        stack.pop_back();
        if (s.size() == 1) continue;
        for (std::size_t k = 0; k < s.size(); ++k) {
          Simplex face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          if (all.insert(face).second) stack.push_back(std::move(face));
        }
      }
    } else {
      for (const auto& s : all) {
        if (s.size() == 1) continue;
        for (std::size_t k = 0; k < s.size(); ++k) {
          Simplex face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          if (!all.count(face)) throw NonClosedComplex("face of a listed simplex is missing");
        }
      }
    }
    SimplicialComplex c;
    c.simplices_.assign(all.begin(), all.end());
    std::stable_sort(c.simplices_.begin(), c.simplices_.end(),
                     [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    for (std::size_t i = 0; i < c.simplices_.size(); ++i) c.index_[c.simplices_[i]] = i;
    return c;
  }

  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
  std::size_t size() const noexcept { return simplices_.size(); }

  /// Highest simplex dimension, or -1 for the empty complex.
  int dimension() const noexcept {
    return simplices_.empty() ? -1 : static_cast<int>(simplices_.back().size()) - 1;
  }

  /// Index range [first, last) of the k-simplices.
  std::pair<std::size_t, std::size_t> range(int k) const {
    auto lo = std::partition_point(simplices_.begin(), simplices_.end(),
                                   [&](const Simplex& s) { return static_cast<int>(s.size()) - 1 < k; });
    auto hi = std::partition_point(lo, simplices_.end(),
                                   [&](const Simplex& s) { return static_cast<int>(s.size()) - 1 <= k; });
    return {static_cast<std::size_t>(lo - simplices_.begin()), static_cast<std::size_t>(hi - simplices_.begin())};
  }

  std::size_t index_of(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw NonClosedComplex("simplex not in complex");
    return it->second;
  }

 private:
  std::vector<Simplex> simplices_;
  std::map<Simplex, std::size_t> index_;
};

/// A[i][j] = ±1 when simplex i is a facet of simplex j; the sign is (-1)^k for
/// the facet omitting the k-th vertex, and vanishes over GF(2).
inline SparseMatrix boundary_matrix(const SimplicialComplex& c, const PrimeField& f) {
  std::vector<Triplet> t;
  const auto& s = c.simplices();
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j].size() < 2) continue;
    for (std::size_t k = 0; k < s[j].size(); ++k) {
      Simplex face = s[j];
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
      const residue v = (k % 2 == 0) ? 1 : f.neg_uncounted(1);
      t.push_back({c.index_of(face), j, v});
    }
  }
  return SparseMatrix::from_triplets(f, s.size(), s.size(), std::move(t));
}

struct BettiResult {
  std::vector<std::size_t> betti;
  std::vector<DenseMatrix> cycles;  // cycles[k]: basis of ker ∂_k over the k-simplices, as columns
  bool used_sparse_pipeline = false;
};

namespace detail {

/// ∂_k restricted to (k-1)-simplex rows and k-simplex columns.
inline DenseMatrix boundary_block(const SparseMatrix& a, std::pair<std::size_t, std::size_t> rows,
                                  std::pair<std::size_t, std::size_t> cols) {
  DenseMatrix out(a.field(), rows.second - rows.first, cols.second - cols.first);
  for (const auto& t : a.triplets()) {
    if (t.i >= rows.first && t.i < rows.second && t.j >= cols.first && t.j < cols.second) {
      out.set(t.i - rows.first, t.j - cols.first, t.v);
    }
  }
  return out;
}

/// Independent columns spanning the column space of x.
inline DenseMatrix column_basis(const DenseMatrix& x) {
  const Echelon e = row_echelon(x.transpose());
  return e.rref.rows_range(0, e.pivots.size()).transpose();
}

struct RankKernel {
  std::size_t rank = 0;
  DenseMatrix kernel;
};

/// Rank and kernel of a rectangular block through the certified square pipeline.
inline RankKernel sparse_rank_kernel(const DenseMatrix& d, SeededRng& rng, const RankOptions& opt) {
  const std::size_t q = std::max(d.rows(), d.cols());
  DenseMatrix padded(d.field(), q, q);
  padded.set_block(0, 0, d);
  const SparseMatrix sp = SparseMatrix::from_dense(padded);
  RankCertificate cert = rank_and_nullspace(sp, rng, opt);
  // Padding columns are free in the kernel; keep only the original coordinates.
  DenseMatrix top = cert.nullspace.rows_range(0, d.cols());
  return {cert.r, d.rows() > d.cols() ? column_basis(top) : top};
}

}  // namespace detail

/// b_k = dim ker ∂_k - rank ∂_{k+1}. Uses the certified sparse rank pipeline
/// when p >= 2q² for every block size q, otherwise dense elimination.
inline BettiResult betti_numbers(const SimplicialComplex& c, const PrimeField& f, SeededRng& rng,
                                 const RankOptions& opt = {}) {
  BettiResult out;
  const int dim = c.dimension();
  if (dim < 0) return out;
  const SparseMatrix a = boundary_matrix(c, f);

  std::size_t largest = 0;
  for (int k = 1; k <= dim; ++k) {
    auto rows = c.range(k - 1), cols = c.range(k);
    largest = std::max({largest, rows.second - rows.first, cols.second - cols.first});
  }
  const auto big = static_cast<unsigned __int128>(largest);
  out.used_sparse_pipeline = static_cast<unsigned __int128>(f.modulus()) >= 2 * big * big;

  // rank[k] = rank ∂_k for k = 1..dim; kernels[k] = ker ∂_k.
  std::vector<std::size_t> rank(static_cast<std::size_t>(dim) + 2, 0);
  std::vector<DenseMatrix> kernels;
  {
    auto v = c.range(0);
    kernels.push_back(DenseMatrix::identity(f, v.second - v.first));
  }
  for (int k = 1; k <= dim; ++k) {
    const DenseMatrix d = detail::boundary_block(a, c.range(k - 1), c.range(k));
    if (out.used_sparse_pipeline) {
      auto rk = detail::sparse_rank_kernel(d, rng, opt);
      rank[static_cast<std::size_t>(k)] = rk.rank;
      kernels.push_back(std::move(rk.kernel));
    } else {
      rank[static_cast<std::size_t>(k)] = dense_rank(d);
      kernels.push_back(dense_nullspace(d));
    }
  }
  for (int k = 0; k <= dim; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    out.betti.push_back(kernels[ku].cols() - rank[ku + 1]);
  }
  out.cycles = std::move(kernels);
  return out;
}

}  // namespace ffinv
