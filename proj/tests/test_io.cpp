#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"

using namespace ffinv;

namespace {

io::LoadedMatrix parse(const std::string& text, io::MatrixFormat fmt = io::MatrixFormat::Auto) {
  std::istringstream in(text);
  return io::read_matrix(in, fmt);
}

}  // namespace

TEST(Io, SparseRoundTrip) {
  PrimeField f(65537);
  SeededRng rng(71);
  const SparseMatrix a = fixtures::random_sparse_nonsingular(f, 20, rng);
  std::ostringstream out;
  io::write_sparse(out, a);
  const io::LoadedMatrix back = parse(out.str());
  EXPECT_TRUE(back.sparse);
  EXPECT_EQ(back.header.p, 65537U);
  EXPECT_EQ(back.to_sparse(f), a);
}

TEST(Io, DenseRoundTrip) {
  PrimeField f(7);
  SeededRng rng(72);
  const DenseMatrix a = fixtures::random_dense(f, 4, 5, rng);
  std::ostringstream out;
  io::write_dense(out, a);
  const io::LoadedMatrix back = parse(out.str());
  EXPECT_FALSE(back.sparse);
  EXPECT_EQ(back.dense(f), a);
}

TEST(Io, AutoDetectPrefersDenseOnAmbiguity) {
  // Three dense rows of three entries ending in a zero row.
  const auto m = parse("3 3 7\n1 2 3\n4 5 6\n0 0 0\n");
  EXPECT_FALSE(m.sparse);
  const auto s = parse("3 3 7\n1 2 3\n0 0 0\n", io::MatrixFormat::Sparse);
  EXPECT_TRUE(s.sparse);
  EXPECT_EQ(s.triplets.size(), 1U);
  EXPECT_TRUE(parse("2 0 7\n").triplets.empty());
}

TEST(Io, CommentsAndBlankLines) {
  const auto m = parse("# header next\n2 2 5\n\n1 1 4 # diagonal\n2 2 3\n0 0 0\n");
  EXPECT_TRUE(m.sparse);
  EXPECT_EQ(m.triplets.size(), 2U);
}

TEST(Io, MatrixFormatErrors) {
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("2 2\n"), FormatError);
  EXPECT_THROW(parse("2 2 6\n1 1 1\n0 0 0\n"), FormatError);               // composite modulus
  EXPECT_THROW(parse("2 2 7\n3 1 1\n0 0 0\n", io::MatrixFormat::Sparse), FormatError);  // out of range
  EXPECT_THROW(parse("2 2 7\n1 1 1\n1 1 2\n0 0 0\n"), FormatError);       // duplicate
  EXPECT_THROW(parse("2 2 7\n1 1 9\n0 0 0\n"), FormatError);              // value >= p
  EXPECT_THROW(parse("2 2 7\n1 1 1\n", io::MatrixFormat::Sparse), FormatError);  // no terminator
  EXPECT_THROW(parse("2 2 7\n1 1 1\n0 0 0\n1 2 1\n", io::MatrixFormat::Sparse), FormatError);
  EXPECT_THROW(parse("2 2 7\n1 x\n1 1\n"), FormatError);
  EXPECT_THROW(parse("2 2 7\n1 1\n"), FormatError);                       // missing row
  EXPECT_THROW(parse("2 2 7\n1 1\n1 -1\n"), FormatError);
  EXPECT_THROW(io::read_matrix_file("/nonexistent/file.txt"), FormatError);
}

TEST(Io, Simplices) {
  std::istringstream in("0 1\n1 2\n# comment\n0 2\n");
  const auto s = io::read_simplices(in);
  EXPECT_EQ(s.size(), 3U);
  std::istringstream empty("\n# nothing\n");
  EXPECT_THROW(io::read_simplices(empty), FormatError);
  std::istringstream bad("0 a\n");
  EXPECT_THROW(io::read_simplices(bad), FormatError);
}

TEST(Io, GroupElements) {
  std::istringstream in("3 2 3 2 5\n0 0 1\n1 1 2\n");
  const auto g = io::read_group_element(in);
  EXPECT_EQ(g.m, 3);
  EXPECT_EQ(g.p, 5U);
  EXPECT_EQ(g.coeffs, (std::vector<std::int64_t>{1, 0, 0, 2, 0, 0}));
  std::istringstream bad_header("3 2 3 2\n");
  EXPECT_THROW(io::read_group_element(bad_header), FormatError);
  std::istringstream out_of_range("3 2 3 2 5\n3 0 1\n");
  EXPECT_THROW(io::read_group_element(out_of_range), FormatError);
  std::istringstream repeated("3 2 3 2 5\n0 0 1\n0 0 2\n");
  EXPECT_THROW(io::read_group_element(repeated), FormatError);
}
