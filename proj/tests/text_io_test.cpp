#include "efp/text_io.hpp"

#include <gtest/gtest.h>

#include "efp/errors.hpp"
#include "efp/rng.hpp"

namespace efp {
namespace {

TEST(TextIoTest, MatrixLayout) {
  EXPECT_EQ(format_matrix(Matrix::from_rows({{1, 0.5}, {-2, 1e-20}})), "2 2\n1 0.5\n-2 1e-20\n");
  EXPECT_EQ(format_vector(Vector{3, 0.1}), "2\n3 0.1\n");
}

TEST(TextIoTest, RoundTripIsBitExact) {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t r = 1 + rng.below(12), c = 1 + rng.below(12);
    const double scale = std::ldexp(1.0, static_cast<int>(rng.below(80)) - 40);
    const Matrix m = random_matrix(rng.next(), r, c, -scale, scale);
    EXPECT_EQ(parse_matrix(format_matrix(m)), m);
    const Vector v = random_vector(rng.next(), c, -scale, scale);
    EXPECT_EQ(parse_vector(format_vector(v)), v);
  }
}

TEST(TextIoTest, ToleratesWhitespaceVariants) {
  EXPECT_EQ(parse_matrix("2 1\r\n  3\n\t4  \n"), Matrix::from_rows({{3}, {4}}));
}

TEST(TextIoTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_matrix(""), FormatError);
  EXPECT_THROW(parse_matrix("0 2\n"), FormatError);
  EXPECT_THROW(parse_matrix("2 2\n1 2 3\n"), FormatError);
  EXPECT_THROW(parse_matrix("1 2\n1 2 3\n"), FormatError);
  EXPECT_THROW(parse_matrix("1 2\n1 x\n"), FormatError);
  EXPECT_THROW(parse_matrix("1 1\nnan\n"), FormatError);
  EXPECT_THROW(parse_vector("2\n1\n"), FormatError);
  EXPECT_THROW(parse_vector("-1\n"), FormatError);
}

}  // namespace
}  // namespace efp
