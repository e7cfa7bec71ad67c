#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace ffinv;
using fixtures::random_dense;

namespace {

DisplacementOperator op_for(OperatorKind kind, std::size_t n, std::size_t s) {
  return kind == OperatorKind::Toeplitz ? DisplacementOperator::toeplitz(n, s) : DisplacementOperator::hankel(n, s);
}

DenseMatrix random_structured(const PrimeField& f, OperatorKind kind, std::size_t s, std::size_t m, SeededRng& rng) {
  return kind == OperatorKind::Toeplitz ? fixtures::random_block_toeplitz(f, s, m, rng)
                                        : fixtures::random_block_hankel(f, s, m, rng);
}

}  // namespace

TEST(GenInv, SchurGeneratorsDescribeTheInverse) {
  PrimeField f(65537);
  SeededRng rng(31);
  for (OperatorKind kind : {OperatorKind::Toeplitz, OperatorKind::Hankel}) {
    for (std::size_t s : {1U, 2U, 3U}) {
      for (std::size_t m : {1U, 2U, 3U, 4U, 7U}) {
        const std::size_t n = s * m;
        const DisplacementOperator op = op_for(kind, n, s);
        const DenseMatrix a = random_structured(f, kind, s, m, rng);
        const auto inv = oracle::inverse(oracle::from(a), 65537);
        if (inv.empty()) continue;
        const GeneratorPair schur = inverse_generators(a, op, GeneratorStrategy::SchurRecursive);
        const GeneratorPair dense = inverse_generators(a, op, GeneratorStrategy::DenseOracle);
        EXPECT_LE(schur.width(), 2 * s);
        // Generators are not unique; compare the products they define.
        EXPECT_EQ(mat_mul_abt(schur.x, schur.y), mat_mul_abt(dense.x, dense.y));
        EXPECT_EQ(oracle::from(decompress(schur)), inv) << to_string(kind) << " s=" << s << " m=" << m;
      }
    }
  }
}

TEST(GenInv, BlockStructInvMatchesOracle) {
  PrimeField f(65537);
  SeededRng rng(32);
  for (OperatorKind kind : {OperatorKind::Toeplitz, OperatorKind::Hankel}) {
    for (GeneratorStrategy strat : {GeneratorStrategy::DenseOracle, GeneratorStrategy::SchurRecursive}) {
      const std::size_t s = 3, m = 6;
      const DenseMatrix a = random_structured(f, kind, s, m, rng);
      BlockInvReport rep;
      const DenseMatrix inv = block_struct_inv(a, s, m, kind, strat, &rep);
      EXPECT_EQ(oracle::from(inv), oracle::inverse(oracle::from(a), 65537));
      EXPECT_EQ(rep.recovery.muls, 0U);
      EXPECT_LE(rep.width, 2 * s);
    }
  }
}

TEST(GenInv, ScalarToeplitzInverseHasRankTwoDisplacement) {
  PrimeField f(101);
  SeededRng rng(33);
  const DenseMatrix t = fixtures::random_block_toeplitz(f, 1, 9, rng);
  if (oracle::inverse(oracle::from(t), 101).empty()) GTEST_SKIP();
  const GeneratorPair g = inverse_generators(t, DisplacementOperator::toeplitz(9, 1), GeneratorStrategy::SchurRecursive);
  EXPECT_LE(g.width(), 2U);
}

TEST(GenInv, SingularLeadingBlockIsReported) {
  PrimeField f(7);
  // Nonsingular block Toeplitz with a zero leading block.
  const DenseMatrix a = DenseMatrix::from_rows(f, {{0, 1}, {1, 0}});
  EXPECT_THROW(inverse_generators(a, DisplacementOperator::toeplitz(2, 1), GeneratorStrategy::SchurRecursive),
               NotStronglyRegular);
  const GeneratorPair g = inverse_generators(a, DisplacementOperator::toeplitz(2, 1), GeneratorStrategy::DenseOracle);
  EXPECT_EQ(decompress(g), a);  // the swap is its own inverse
  EXPECT_THROW(block_struct_inv(DenseMatrix(f, 4, 4), 2, 2, OperatorKind::Toeplitz, GeneratorStrategy::DenseOracle),
               SingularMatrix);
}

TEST(GenInv, OtherKindsRequireDenseStrategy) {
  PrimeField f(101);
  const auto op = DisplacementOperator::cauchy(1, {1, 2}, {3, 4});
  const DenseMatrix a = DenseMatrix::from_rows(f, {{1, 2}, {3, 5}});
  EXPECT_THROW(inverse_generators(a, op, GeneratorStrategy::SchurRecursive), UsageError);
  const GeneratorPair g = inverse_generators(a, op, GeneratorStrategy::DenseOracle);
  EXPECT_EQ(mat_mul(decompress(g), a), DenseMatrix::identity(f, 2));
}

TEST(GenInv, NaiveColumnRecoveryAgreesAndCostsMore) {
  PrimeField f(65537);
  SeededRng rng(34);
  for (OperatorKind kind : {OperatorKind::Toeplitz, OperatorKind::Hankel}) {
    const std::size_t s = 4, n = 16;
    const GeneratorPair g{random_dense(f, n, 2 * s, rng), random_dense(f, n, 2 * s, rng), op_for(kind, n, s)};
    OpCounter naive, rect;
    DenseMatrix a(f, 0, 0), b(f, 0, 0);
    {
      CounterScope scope(naive);
      a = naive_column_recovery(g);
    }
    {
      CounterScope scope(rect);
      b = decompress(g);
    }
    EXPECT_EQ(a, b);
    EXPECT_LT(rect.muls, naive.muls);
  }
}
