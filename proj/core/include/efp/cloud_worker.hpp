#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include "efp/masking.hpp"
#include "efp/matrix.hpp"

namespace efp {

// The worker only ever sees the public MaskedProblem; nothing here accepts a
// SecretKey.

struct Honest {};

/// Ignore the problem and return a seeded random n x m matrix with entries in [-1, 1).
struct RandomResult {
  std::uint64_t seed = 0;
};

/// Honest result with `delta` added at (row, col). delta must be non-zero.
struct PerturbOne {
  std::size_t row = 0;
  std::size_t col = 0;
  double delta = 1e-3;
};

/// Honest result cut down to the first keep_rows rows (1 <= keep_rows < n).
struct Truncated {
  std::size_t keep_rows = 1;
};

using CloudBehavior = std::variant<Honest, RandomResult, PerturbOne, Truncated>;

/// R' = (x2 x1)^-1 x2, an n x m matrix.
///
/// meter.sm grows by m*n^2 (x2 x1) + n^3 (inverse) + m*n^2 (times x2).
/// Throws SingularMatrixError when x2 x1 is singular; the caller treats that
/// as a no-result.
Matrix compute(const MaskedProblem& mp, CostMeter& meter);

/// compute() followed by the behavior's tampering. RandomResult skips the
/// honest work entirely and never throws SingularMatrixError.
Matrix compute_with_behavior(const MaskedProblem& mp, const CloudBehavior& behavior,
                             CostMeter& meter);

}  // namespace efp
