#pragma once

// Text formats.
//   matrix:   header `rows cols p`, then either 1-based `i j v` lines ended by
//             `0 0 0` (sparse) or `rows` lines of `cols` residues (dense)
//   complex:  one simplex per line, vertex ids separated by spaces
//   group:    header `m s t u p`, then `a b coeff` lines

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ffinv/apps/group_ring.hpp"
#include "ffinv/apps/homology.hpp"
#include "ffinv/matrix.hpp"

namespace ffinv::io {

enum class MatrixFormat { Auto, Sparse, Dense };

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ls(text);
    Line l{number, {}};
    for (std::string tok; ls >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) lines.push_back(std::move(l));
  }
  return lines;
}

inline std::int64_t to_int(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw FormatError("line " + std::to_string(line) + ": expected an integer, got '" + tok + "'");
  }
  return v;
}

inline std::uint64_t to_uint(const std::string& tok, std::size_t line) {
  const std::int64_t v = to_int(tok, line);
  if (v < 0) throw FormatError("line " + std::to_string(line) + ": negative value " + tok);
  return static_cast<std::uint64_t>(v);
}

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

inline bool is_terminator(const Line& l) {
  return l.tokens.size() == 3 && l.tokens[0] == "0" && l.tokens[1] == "0" && l.tokens[2] == "0";
}

}  // namespace detail

struct MatrixHeader {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t p = 0;
};

struct LoadedMatrix {
  MatrixHeader header;
  bool sparse = false;
  std::vector<Triplet> triplets;  // 0-based
  DenseMatrix dense(const PrimeField& f) const {
    DenseMatrix d(f, header.rows, header.cols);
    for (const auto& t : triplets) d.set(t.i, t.j, t.v);
    return d;
  }
  SparseMatrix to_sparse(const PrimeField& f) const {
    return SparseMatrix::from_triplets(f, header.rows, header.cols, triplets);
  }
};

inline LoadedMatrix read_matrix(std::istream& in, MatrixFormat fmt = MatrixFormat::Auto) {
  const auto lines = detail::tokenize(in);
  if (lines.empty()) throw FormatError("empty matrix file");
  const auto& h = lines.front();
  if (h.tokens.size() != 3) throw FormatError("line " + std::to_string(h.number) + ": header must be `rows cols p`");
  LoadedMatrix out;
  out.header = {detail::to_uint(h.tokens[0], h.number), detail::to_uint(h.tokens[1], h.number),
                detail::to_uint(h.tokens[2], h.number)};
  const auto& hd = out.header;
  if (hd.p < 2 || !is_prime(hd.p)) throw FormatError("header modulus " + std::to_string(hd.p) + " is not prime");

  const std::size_t body = lines.size() - 1;
  if (fmt == MatrixFormat::Auto) {
    // A dense n×3 block whose last row is zero also looks sparse; dense wins then.
    bool sparse_shape = body >= 1 && detail::is_terminator(lines.back());
    bool dense_shape = body == hd.rows;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      sparse_shape = sparse_shape && lines[k].tokens.size() == 3;
      dense_shape = dense_shape && lines[k].tokens.size() == hd.cols;
    }
    fmt = sparse_shape && !dense_shape ? MatrixFormat::Sparse : MatrixFormat::Dense;
  }

  if (fmt == MatrixFormat::Sparse) {
    out.sparse = true;
    bool terminated = false;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto& l = lines[k];
      if (terminated) throw FormatError("line " + std::to_string(l.number) + ": data after `0 0 0`");
      if (l.tokens.size() != 3) throw FormatError("line " + std::to_string(l.number) + ": expected `i j v`");
      if (detail::is_terminator(l)) {
        terminated = true;
        continue;
      }
      const std::uint64_t i = detail::to_uint(l.tokens[0], l.number);
      const std::uint64_t j = detail::to_uint(l.tokens[1], l.number);
      const std::uint64_t v = detail::to_uint(l.tokens[2], l.number);
      if (i < 1 || i > hd.rows || j < 1 || j > hd.cols) {
        throw FormatError("line " + std::to_string(l.number) + ": index out of range");
      }
      if (v == 0 || v >= hd.p) throw FormatError("line " + std::to_string(l.number) + ": value must be in [1, p)");
      out.triplets.push_back({i - 1, j - 1, v});
    }
    if (!terminated) throw FormatError("sparse matrix is missing the `0 0 0` terminator");
    std::sort(out.triplets.begin(), out.triplets.end(),
              [](const Triplet& a, const Triplet& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    for (std::size_t k = 1; k < out.triplets.size(); ++k) {
      if (out.triplets[k].i == out.triplets[k - 1].i && out.triplets[k].j == out.triplets[k - 1].j) {
        throw FormatError("duplicate entry at (" + std::to_string(out.triplets[k].i + 1) + "," +
                          std::to_string(out.triplets[k].j + 1) + ")");
      }
    }
    return out;
  }

  if (hd.cols == 0 && body == 0) return out;  // n×0 blocks have no data lines
  if (body != hd.rows) {
    throw FormatError("dense matrix has " + std::to_string(body) + " rows, header says " + std::to_string(hd.rows));
  }
  for (std::size_t i = 0; i < hd.rows; ++i) {
    const auto& l = lines[i + 1];
    if (l.tokens.size() != hd.cols) {
      throw FormatError("line " + std::to_string(l.number) + ": expected " + std::to_string(hd.cols) + " entries");
    }
    for (std::size_t j = 0; j < hd.cols; ++j) {
      const std::uint64_t v = detail::to_uint(l.tokens[j], l.number);
      if (v >= hd.p) throw FormatError("line " + std::to_string(l.number) + ": entry not below p");
      if (v != 0) out.triplets.push_back({i, j, v});
    }
  }
  return out;
}

inline LoadedMatrix read_matrix_file(const std::string& path, MatrixFormat fmt = MatrixFormat::Auto) {
  auto in = detail::open(path);
  return read_matrix(in, fmt);
}

inline void write_dense(std::ostream& out, const DenseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << ' ' << a.field().modulus() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a.at(i, j);
    out << '\n';
  }
}

inline void write_sparse(std::ostream& out, const SparseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << ' ' << a.field().modulus() << '\n';
  for (const auto& t : a.triplets()) out << t.i + 1 << ' ' << t.j + 1 << ' ' << t.v << '\n';
  out << "0 0 0\n";
}

inline std::vector<Simplex> read_simplices(std::istream& in) {
  std::vector<Simplex> out;
  for (const auto& l : detail::tokenize(in)) {
    Simplex s;
    for (const auto& tok : l.tokens) s.push_back(detail::to_int(tok, l.number));
    out.push_back(std::move(s));
  }
  if (out.empty()) throw FormatError("complex file lists no simplices");
  return out;
}

struct GroupElementFile {
  std::int64_t m = 0, s = 0, t = 0, u = 0;
  std::uint64_t p = 0;
  std::vector<std::int64_t> coeffs;  // indexed a·s + b
};

inline GroupElementFile read_group_element(std::istream& in) {
  const auto lines = detail::tokenize(in);
  if (lines.empty() || lines.front().tokens.size() != 5) throw FormatError("group file header must be `m s t u p`");
  const auto& h = lines.front();
  GroupElementFile g;
  g.m = detail::to_int(h.tokens[0], h.number);
  g.s = detail::to_int(h.tokens[1], h.number);
  g.t = detail::to_int(h.tokens[2], h.number);
  g.u = detail::to_int(h.tokens[3], h.number);
  g.p = detail::to_uint(h.tokens[4], h.number);
  if (g.m < 1 || g.s < 1 || g.m * g.s > 4096) throw FormatError("group order out of range");
  g.coeffs.assign(static_cast<std::size_t>(g.m * g.s), 0);
  std::vector<bool> seen(g.coeffs.size(), false);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.tokens.size() != 3) throw FormatError("line " + std::to_string(l.number) + ": expected `a b coeff`");
    const std::int64_t a = detail::to_int(l.tokens[0], l.number);
    const std::int64_t b = detail::to_int(l.tokens[1], l.number);
    if (a < 0 || a >= g.m || b < 0 || b >= g.s) {
      throw FormatError("line " + std::to_string(l.number) + ": exponent out of range");
    }
    const auto idx = static_cast<std::size_t>(a * g.s + b);
    if (seen[idx]) throw FormatError("line " + std::to_string(l.number) + ": repeated group element");
    seen[idx] = true;
    g.coeffs[idx] = detail::to_int(l.tokens[2], l.number);
  }
  return g;
}

}  // namespace ffinv::io
