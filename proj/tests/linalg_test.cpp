#include <gtest/gtest.h>

#include <random>

#include "aisle/error.hpp"
#include "aisle/linalg.hpp"

using namespace aisle;

namespace {

const Field Q = Field::rationals();

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, Field f, long range = 3) {
  Matrix m(r, c, f);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      // sparse-ish so that rank deficiency shows up
      if (rng() % 3 == 0) continue;
      m(i, j) = f.from_int(static_cast<long long>(rng() % (2 * range + 1)) - range);
    }
  }
  return m;
}

}  // namespace

TEST(Field, RationalArithmetic) {
  const Scalar half = Q.parse_scalar("1/2");
  EXPECT_EQ((half + half).to_string(), "1");
  EXPECT_EQ((half * Q.from_int(3)).to_string(), "3/2");
  EXPECT_EQ(Q.parse_scalar("-6/4").to_string(), "-3/2");
  EXPECT_THROW(Q.zero().inverse(), InvalidInput);
}

TEST(Field, PrimeArithmetic) {
  const Field f7 = Field::prime(7);
  EXPECT_EQ((f7.from_int(5) + f7.from_int(4)).to_string(), "2");
  EXPECT_EQ(f7.from_int(3).inverse().to_string(), "5");
  EXPECT_EQ(f7.parse_scalar("1/2").to_string(), "4");
  EXPECT_EQ(f7.from_int(-1).to_string(), "6");
  EXPECT_THROW(Field::prime(9), InvalidInput);
  EXPECT_THROW(f7.from_int(1) + Q.from_int(1), Mismatch);
}

TEST(Field, Parse) {
  EXPECT_TRUE(Field::parse("Q").is_rational());
  EXPECT_EQ(Field::parse("F_5").characteristic(), 5u);
  EXPECT_EQ(Field::parse("GF(101)").characteristic(), 101u);
  EXPECT_EQ(Field::parse("13").characteristic(), 13u);
  EXPECT_THROW(Field::parse("R"), InvalidInput);
}

TEST(Rref, IdentityIsFixed) {
  const Rref r = rref(Matrix::identity(2, Q));
  EXPECT_EQ(r.reduced, Matrix::identity(2, Q));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.rank(), 2u);
}

TEST(Rref, ZeroMatrix) {
  const Matrix z(3, 3, Q);
  const Rref r = rref(z);
  EXPECT_EQ(r.reduced, z);
  EXPECT_TRUE(r.pivots.empty());
  EXPECT_EQ(r.rank(), 0u);
}

TEST(Rref, RankOneByHand) {
  // R2 <- R2 - 2 R1 leaves [[1,2],[0,0]].
  const Rref r = rref(Matrix::from_ints({{1, 2}, {2, 4}}, Q));
  EXPECT_EQ(r.reduced, Matrix::from_ints({{1, 2}, {0, 0}}, Q));
  EXPECT_EQ(r.rank(), 1u);
}

TEST(Kernel, Identity) { EXPECT_EQ(kernel_basis(Matrix::identity(4, Q)).cols(), 0u); }

TEST(Kernel, ZeroGivesStandardBasis) {
  EXPECT_EQ(kernel_basis(Matrix(3, 3, Q)), Matrix::identity(3, Q));
}

TEST(Kernel, SingleRow) {
  const Matrix m = Matrix::from_ints({{1, 2}}, Q);
  const Matrix k = kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_TRUE((m * k).is_zero());
  EXPECT_EQ(k, Matrix::from_ints({{-2}, {1}}, Q));
}

TEST(Solve, Identity) {
  const Matrix b = Matrix::from_ints({{4}, {-1}, {7}}, Q);
  EXPECT_EQ(*solve(Matrix::identity(3, Q), b), b);
}

TEST(Solve, Inconsistent) {
  EXPECT_FALSE(solve(Matrix::from_ints({{1}, {0}}, Q), Matrix::from_ints({{0}, {1}}, Q)).has_value());
}

TEST(Solve, Fraction) {
  const auto x = solve(Matrix::from_ints({{2}}, Q), Matrix::from_ints({{3}}, Q));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)(0, 0).to_string(), "3/2");
  EXPECT_EQ(Matrix::from_ints({{2}}, Q) * *x, Matrix::from_ints({{3}}, Q));
}

TEST(Solve, ShapeMismatchThrows) {
  EXPECT_THROW(solve(Matrix::identity(2, Q), Matrix(3, 1, Q)), InvalidInput);
}

TEST(Subspace, Coordinates) {
  const Subspace s(Matrix::from_ints({{1, 0}, {1, 1}, {0, 2}}, Q));
  const Matrix v = Matrix::from_ints({{2}, {5}, {6}}, Q);
  EXPECT_EQ(*s.coordinates(v), Matrix::from_ints({{2}, {3}}, Q));
  EXPECT_FALSE(s.contains(Matrix::from_ints({{1}, {0}, {0}}, Q)));
}

TEST(LinalgProperty, RrefIdempotentAndRankNullity) {
  std::mt19937_64 rng(20240601);
  for (const Field f : {Q, Field::prime(5), Field::prime(101)}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t r = 1 + rng() % 6;
      const std::size_t c = 1 + rng() % 6;
      const Matrix m = random_matrix(rng, r, c, f);
      const Rref once = rref(m);
      EXPECT_EQ(rref(once.reduced).reduced, once.reduced);
      const Matrix k = kernel_basis(m);
      EXPECT_EQ(once.rank() + k.cols(), c);
      EXPECT_TRUE((m * k).is_zero());
      EXPECT_EQ(rank(k), k.cols());
    }
  }
}

TEST(LinalgProperty, SolveRoundTrip) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Matrix a = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, Q);
    const Matrix x = random_matrix(rng, a.cols(), 1, Q);
    const Matrix b = a * x;
    const auto y = solve(a, b);
    ASSERT_TRUE(y.has_value());
    EXPECT_EQ(a * *y, b);
  }
}

TEST(LinalgProperty, InverseIsTwoSided) {
  std::mt19937_64 rng(5);
  int invertible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const Matrix m = random_matrix(rng, n, n, Q);
    const auto inv = inverse(m);
    EXPECT_EQ(inv.has_value(), rank(m) == n);
    if (!inv) continue;
    ++invertible;
    EXPECT_TRUE((m * *inv).is_identity());
    EXPECT_TRUE((*inv * m).is_identity());
  }
  EXPECT_GT(invertible, 0);
}

TEST(LinalgProperty, RankAgreesOverLargePrime) {
  // Small integer entries: all minors are far below 2^31 - 1.
  std::mt19937_64 rng(11);
  const Field big = Field::prime(2147483647);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<long long>> rows(1 + rng() % 5, std::vector<long long>(1 + rng() % 5));
    for (auto& row : rows) {
      for (auto& x : row) x = static_cast<long long>(rng() % 5) - 2;
    }
    EXPECT_EQ(rank(Matrix::from_ints(rows, Q)), rank(Matrix::from_ints(rows, big)));
  }
}
