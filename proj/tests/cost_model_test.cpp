#include "efp/cost_model.hpp"

#include <gtest/gtest.h>

#include "efp/cloud_worker.hpp"
#include "efp/masking.hpp"
#include "efp/protocol.hpp"
#include "efp/rng.hpp"
#include "efp/verifier.hpp"
#include "oracles.hpp"

namespace efp {
namespace {

TEST(CostModelTest, MetersMatchFormulas) {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng.below(15), m = n + 1 + rng.below(25);
    const std::size_t k = 4 + rng.below(6);
    const Matrix x = random_matrix(rng.next(), m, n, -1, 1);
    const Vector y = random_vector(rng.next(), m, -1, 1);
    const SecretKey sk = keygen(n, k, rng.next());

    CostMeter pg, cp, vf, rc, fast, local;
    const MaskedProblem mp = probgen(x, sk, pg);
    const Matrix r_prime = compute(mp, cp);
    (void)verify(mp.x1(), mp.x2(), r_prime, 2, kDefaultTolerance, 0, vf);
    (void)recover(sk, r_prime, y, rc);
    (void)recover_weights_fast(sk, r_prime, y, fast);
    (void)local_solve(x, y, local);

    auto counts = [](const CostMeter& c) { return PhaseCounts{c.sm(), c.as()}; };
    EXPECT_EQ(counts(pg), probgen_counts(m, n, k));
    EXPECT_EQ(counts(cp), compute_counts(m, n));
    EXPECT_EQ(counts(vf), verify_counts(m, n, 2));
    EXPECT_EQ(counts(rc), recover_counts(m, n, k));
    EXPECT_EQ(counts(fast), recover_fast_counts(m, n, k));
    EXPECT_EQ(counts(local), local_solve_counts(m, n));
  }
}

TEST(CostModelTest, ReferenceFormulas) {
  EXPECT_EQ(reference_probgen_counts(10, 4, 8).sm, 2u * 7 * 40 + 6u * 14);
  EXPECT_EQ(reference_compute_counts(10, 4).sm, 400u + 64 + 160);
  EXPECT_EQ(reference_verify_counts(10, 4).sm, 120u);
  EXPECT_EQ(reference_recover_counts(10, 4, 8).sm, 320u + 24);
  EXPECT_EQ(reference_recover_sm_text(10, 4, 8), 280u + 24);
  EXPECT_DOUBLE_EQ(reference_efficiency_ratio(10, 4, 8),
                   (3.0 * 7 * 40 + 6.0 * 18) / (400.0 + 64 + 160));
}

TEST(CostModelTest, ClientWorkIsQuadraticWhileBaselineIsCubic) {
  for (std::uint64_t n : {100u, 1000u, 5000u}) {
    const std::uint64_t client = probgen_counts(n, n, 8).sm + verify_counts(n, n, 1).sm +
                                 recover_counts(n, n, 8).sm;
    EXPECT_LT(client * 10, local_solve_counts(n, n).sm);
  }
}

TEST(LocalSolveTest, MatchesCholeskyOracle) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(20), m = n + rng.below(40);
    const Matrix x = random_matrix(rng.next(), m, n, -1, 1);
    const Vector y = random_vector(rng.next(), m, -5, 5);
    CostMeter meter;
    const Vector w = local_solve(x, y, meter);
    const auto expect = oracle::normal_equations_cholesky(x, {y.data().begin(), y.data().end()});
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(w[i], expect[i], 1e-8);
  }
}

TEST(LocalSolveTest, ExactFitRecoversWeights) {
  const Matrix x = random_matrix(13, 40, 6, -1, 1);
  const Vector truth{1.5, -2, 0.25, 3, -0.5, 0};
  CostMeter meter;
  const Vector y = mat_vec(x, truth, meter);
  EXPECT_LE(max_abs_diff(local_solve(x, y, meter), truth), 1e-10);
}

}  // namespace
}  // namespace efp
