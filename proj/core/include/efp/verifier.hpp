#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "efp/matrix.hpp"

namespace efp {

inline constexpr std::size_t kDefaultRounds = 1;
inline constexpr double kDefaultTolerance = 1e-6;

struct VerificationReport {
  bool passed = false;
  std::size_t rounds_run = 0;
  /// Max over rounds of |V1 - V2 R'|_inf / max(1, |V1|_inf).
  double max_residual = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Public check of a returned R' using only x1, x2 and R'.
///
/// Round i draws r (1 x n, uniform in [-1, 1)) from derive_seed(seed, i),
/// forms V1 = r x2 and V2 = V1 x1, and compares V1 with V2 R'. Every round
/// costs exactly 3mn scalar multiplications. Passes iff every round's
/// relative residual is <= tol.
///
/// Over the reals a wrong R' survives a round only for r in a measure-zero
/// set; in floating point the residual must clear `tol`, so tampering far
/// below tol relative to |V1| is indistinguishable from rounding.
///
/// Throws ShapeError on inconsistent shapes, ParameterError for rounds == 0
/// or tol <= 0.
VerificationReport verify(const Matrix& x1, const Matrix& x2, const Matrix& r_prime,
                          std::size_t rounds, double tol, std::uint64_t seed, CostMeter& meter);

VerificationReport verify(const Matrix& x1, const Matrix& x2, const Matrix& r_prime,
                          std::size_t rounds = kDefaultRounds, double tol = kDefaultTolerance,
                          std::uint64_t seed = 0);

/// {"passed", "rounds_run", "max_residual", "seed"}
std::string report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const std::string& text);

}  // namespace efp
