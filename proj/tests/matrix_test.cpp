#include "efp/matrix.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "efp/errors.hpp"
#include "efp/rng.hpp"
#include "oracles.hpp"

namespace efp {
namespace {

TEST(MatrixTest, RejectsBadConstruction) {
  EXPECT_THROW(Matrix(0, 3), ShapeError);
  EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_THROW(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), ParameterError);
  EXPECT_THROW(Matrix(1, 1, {std::numeric_limits<double>::infinity()}), ParameterError);
  EXPECT_THROW(Vector(0), ShapeError);
}

TEST(MatMulTest, IdentityTimesA) {
  const Matrix a = random_matrix(1, 3, 5, -1.0, 1.0);
  CostMeter meter;
  EXPECT_EQ(mat_mul(Matrix::identity(3), a, meter), a);
}

TEST(MatMulTest, HandComputedProduct) {
  CostMeter meter;
  const Matrix c = mat_mul(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{5}, {6}}), meter);
  EXPECT_EQ(c, Matrix::from_rows({{17}, {39}}));
  EXPECT_EQ(meter.sm(), 2u * 2u * 1u);
}

TEST(MatMulTest, RowTimesMatrixCountsMn) {
  const std::size_t n = 7, m = 11;
  CostMeter meter;
  const Matrix out = mat_mul(random_matrix(1, 1, n, -1, 1), random_matrix(2, n, m, -1, 1), meter);
  EXPECT_EQ(out.rows(), 1u);
  EXPECT_EQ(out.cols(), m);
  EXPECT_EQ(meter.sm(), n * m);
  EXPECT_EQ(meter.as(), 0u);
}

TEST(MatMulTest, ShapeMismatchThrows) {
  CostMeter meter;
  EXPECT_THROW(mat_mul(Matrix(2, 3), Matrix(2, 3), meter), ShapeError);
  EXPECT_EQ(meter.sm(), 0u);
}

TEST(MatMulTest, MeterIncrementIsExactForRandomShapes) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng.below(9), c = 1 + rng.below(9), p = 1 + rng.below(9);
    CostMeter meter;
    meter.add_sm(17);
    const Matrix a = random_matrix(rng.next(), r, c, -1, 1);
    const Matrix b = random_matrix(rng.next(), c, p, -1, 1);
    const Matrix got = mat_mul(a, b, meter);
    EXPECT_EQ(meter.sm(), 17 + r * c * p);
    EXPECT_LE(max_abs_diff(got, oracle::multiply(a, b)), 1e-14);
  }
}

TEST(TransposeTest, Cases) {
  EXPECT_EQ(transpose(Matrix::identity(4)), Matrix::identity(4));
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(transpose(a), Matrix::from_rows({{1, 4}, {2, 5}, {3, 6}}));
  const Matrix b = random_matrix(9, 5, 8, -3, 3);
  EXPECT_EQ(transpose(transpose(b)), b);
}

TEST(TransposeTest, ProductTransposeIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = random_matrix(seed, 8, 8, -1, 1);
    const Matrix b = random_matrix(seed + 100, 8, 8, -1, 1);
    CostMeter meter;
    const Matrix lhs = transpose(mat_mul(a, b, meter));
    const Matrix rhs = mat_mul(transpose(b), transpose(a), meter);
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
  }
}

TEST(InverseTest, Identity) {
  CostMeter meter;
  EXPECT_EQ(inverse(Matrix::identity(4), meter), Matrix::identity(4));
  EXPECT_EQ(meter.sm(), 64u);
}

TEST(InverseTest, Diagonal) {
  CostMeter meter;
  const Matrix inv = inverse(Matrix::from_rows({{2, 0}, {0, 4}}), meter);
  EXPECT_LE(max_abs_diff(inv, Matrix::from_rows({{0.5, 0}, {0, 0.25}})), 1e-15);
}

TEST(InverseTest, MatchesAdjugateFormula) {
  // [[a b][c d]]^-1 = [[d -b][-c a]] / (ad - bc)
  const double a = 2, b = 1, c = 1, d = 2, det = a * d - b * c;
  CostMeter meter;
  const Matrix inv = inverse(Matrix::from_rows({{a, b}, {c, d}}), meter);
  EXPECT_LE(max_abs_diff(inv, Matrix::from_rows({{d / det, -b / det}, {-c / det, a / det}})), 1e-15);
}

TEST(InverseTest, NeedsPivoting) {
  CostMeter meter;
  const Matrix a = Matrix::from_rows({{0, 1, 2}, {1, 0, 3}, {4, -3, 8}});
  const Matrix inv = inverse(a, meter);
  EXPECT_LE(max_abs_diff(mat_mul(a, inv, meter), Matrix::identity(3)), 1e-14);
}

TEST(InverseTest, RandomDiagonallyDominant) {
  for (std::size_t n : {3u, 10u, 40u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Matrix a = random_matrix(seed, n, n, 1.0, 2.0);
      for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
      CostMeter meter;
      const Matrix inv = inverse(a, meter);
      EXPECT_EQ(meter.sm(), n * n * n);
      CostMeter scratch;
      const double err = max_abs_diff(mat_mul(a, inv, scratch), Matrix::identity(n));
      EXPECT_LE(err, 1e-9 * std::max(1.0, a.norm_inf()));
    }
  }
}

TEST(InverseTest, SingularAndNonSquare) {
  CostMeter meter;
  EXPECT_THROW(inverse(Matrix::from_rows({{1, 2}, {2, 4}}), meter), SingularMatrixError);
  EXPECT_THROW(inverse(Matrix(3, 3), meter), SingularMatrixError);
  EXPECT_THROW(inverse(Matrix(2, 3), meter), ShapeError);
}

TEST(MatVecTest, Cases) {
  CostMeter meter;
  const Vector v{4, 5};
  EXPECT_EQ(mat_vec(Matrix::identity(2), v, meter), v);
  EXPECT_EQ(mat_vec(Matrix::from_rows({{2, 1}, {1, 2}}), v, meter), (Vector{13, 14}));
  EXPECT_EQ(mat_vec(Matrix(3, 2), v, meter), Vector(3));
  EXPECT_EQ(meter.sm(), 4u + 4u + 6u);
  EXPECT_THROW(mat_vec(Matrix(2, 3), v, meter), ShapeError);
}

TEST(RandomMatrixTest, DeterministicAndInRange) {
  const Matrix a = random_matrix(7, 2, 2, 0, 1);
  EXPECT_EQ(a, random_matrix(7, 2, 2, 0, 1));
  EXPECT_NE(a, random_matrix(8, 2, 2, 0, 1));
  const Matrix big = random_matrix(3, 50, 50, -2.0, 5.0);
  for (double x : big.data()) {
    EXPECT_GE(x, -2.0);
    EXPECT_LT(x, 5.0);
  }
  EXPECT_THROW(random_matrix(1, 2, 2, 1.0, 1.0), ParameterError);
}

TEST(MaxAbsDiffTest, Cases) {
  const Matrix a = random_matrix(4, 3, 3, -1, 1);
  EXPECT_EQ(max_abs_diff(a, a), 0.0);
  EXPECT_EQ(max_abs_diff(Matrix::identity(2), Matrix(2, 2)), 1.0);
  EXPECT_EQ(max_abs_diff(Matrix::from_rows({{1, 2}}), Matrix::from_rows({{1, 2.5}})), 0.5);
  EXPECT_THROW(max_abs_diff(Matrix(1, 2), Matrix(2, 1)), ShapeError);
}

TEST(RankTest, Cases) {
  EXPECT_EQ(rank(Matrix::identity(5)), 5u);
  EXPECT_EQ(rank(Matrix(3, 4)), 0u);
  EXPECT_EQ(rank(Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}})), 2u);
  EXPECT_EQ(rank(random_matrix(1, 8, 5, -1, 1)), 5u);
}

}  // namespace
}  // namespace efp
