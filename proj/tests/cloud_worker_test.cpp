#include "efp/cloud_worker.hpp"

#include <gtest/gtest.h>

#include "efp/errors.hpp"
#include "efp/rng.hpp"
#include "efp/verifier.hpp"
#include "oracles.hpp"

namespace efp {
namespace {

MaskedProblem masked(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t k = 8) {
  CostMeter meter;
  return probgen(random_matrix(seed, m, n, -1, 1), keygen(n, k, seed + 1), meter);
}

TEST(ComputeTest, PermutationOnlyKeyOnIdentity) {
  const SecretKey sk = SecretKey::unsafe_for_privacy_testing(3, {Permute{{1, 2, 0}}}, {});
  CostMeter meter;
  const MaskedProblem mp = probgen(Matrix::identity(3), sk, meter);
  const Matrix r_prime = compute(mp, meter);
  // x2 x1 is the permutation itself, so R' is its inverse times the identity.
  EXPECT_LE(max_abs_diff(r_prime, transpose(mp.x1())), 1e-15);
}

TEST(ComputeTest, LeftInverseProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng.below(20), m = n + 1 + rng.below(30);
    const MaskedProblem mp = masked(rng.next(), m, n);
    CostMeter meter;
    const Matrix r_prime = compute(mp, meter);
    const Matrix gram = oracle::multiply(mp.x2(), mp.x1());
    EXPECT_LE(max_abs_diff(oracle::multiply(gram, r_prime), mp.x2()), 1e-6);
  }
}

TEST(ComputeTest, CountsMatchFormula) {
  const MaskedProblem mp = masked(3, 20, 7);
  CostMeter meter;
  (void)compute(mp, meter);
  EXPECT_EQ(meter.sm(), 2u * 20 * 7 * 7 + 7u * 7 * 7);
  EXPECT_EQ(meter.as(), 0u);
}

TEST(ComputeTest, DuplicateColumnsAreSingular) {
  Matrix x = random_matrix(1, 10, 4, -1, 1);
  for (std::size_t r = 0; r < 10; ++r) x(r, 3) = x(r, 1);
  CostMeter meter;
  const MaskedProblem mp = probgen(x, keygen(4, 8, 2), meter);
  EXPECT_THROW(compute(mp, meter), SingularMatrixError);
  EXPECT_NO_THROW(compute_with_behavior(mp, RandomResult{1}, meter));
}

TEST(BehaviorTest, HonestEqualsCompute) {
  const MaskedProblem mp = masked(4, 15, 5);
  CostMeter a, b;
  EXPECT_EQ(compute_with_behavior(mp, Honest{}, a), compute(mp, b));
}

TEST(BehaviorTest, PerturbChangesOneEntry) {
  const MaskedProblem mp = masked(6, 15, 5);
  CostMeter meter;
  const Matrix honest = compute(mp, meter);
  const Matrix bad = compute_with_behavior(mp, PerturbOne{2, 9, 0.5}, meter);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 15; ++c) {
      EXPECT_EQ(bad(r, c), honest(r, c) + ((r == 2 && c == 9) ? 0.5 : 0.0));
    }
  }
  EXPECT_THROW(compute_with_behavior(mp, PerturbOne{5, 0, 1.0}, meter), ParameterError);
  EXPECT_THROW(compute_with_behavior(mp, PerturbOne{0, 15, 1.0}, meter), ParameterError);
  EXPECT_THROW(compute_with_behavior(mp, PerturbOne{0, 0, 0.0}, meter), ParameterError);
}

TEST(BehaviorTest, TruncateKeepsLeadingRows) {
  const MaskedProblem mp = masked(7, 12, 6);
  CostMeter meter;
  const Matrix honest = compute(mp, meter);
  const Matrix cut = compute_with_behavior(mp, Truncated{4}, meter);
  ASSERT_EQ(cut.rows(), 4u);
  ASSERT_EQ(cut.cols(), 12u);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 12; ++c) EXPECT_EQ(cut(r, c), honest(r, c));
  }
  EXPECT_THROW(compute_with_behavior(mp, Truncated{0}, meter), ParameterError);
  EXPECT_THROW(compute_with_behavior(mp, Truncated{6}, meter), ParameterError);
}

TEST(BehaviorTest, RandomResultIsSeededAndNeverVerifies) {
  Rng rng(8);
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(6), m = n + 1 + rng.below(10);
    const MaskedProblem mp = masked(rng.next(), m, n, 4);
    CostMeter meter;
    const std::uint64_t seed = rng.next();
    const Matrix r = compute_with_behavior(mp, RandomResult{seed}, meter);
    EXPECT_EQ(r, compute_with_behavior(mp, RandomResult{seed}, meter));
    EXPECT_EQ(r.rows(), n);
    EXPECT_EQ(r.cols(), m);
    rejected += !verify(mp.x1(), mp.x2(), r, 1, kDefaultTolerance, rng.next()).passed;
  }
  EXPECT_EQ(rejected, 1000);
}

}  // namespace
}  // namespace efp
