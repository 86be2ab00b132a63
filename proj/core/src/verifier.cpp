#include "efp/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <string>

#include "efp/errors.hpp"
#include "efp/rng.hpp"

namespace efp {

VerificationReport verify(const Matrix& x1, const Matrix& x2, const Matrix& r_prime,
                          std::size_t rounds, double tol, std::uint64_t seed, CostMeter& meter) {
  const std::size_t m = x1.rows(), n = x1.cols();
  if (x2.rows() != n || x2.cols() != m) throw ShapeError("verify: x2 must be n x m");
  if (r_prime.rows() != n || r_prime.cols() != m) throw ShapeError("verify: result must be n x m");
  if (rounds == 0) throw ParameterError("verify: rounds must be at least 1");
  if (!(tol > 0.0)) throw ParameterError("verify: tolerance must be positive");

  VerificationReport report;
  report.seed = seed;
  for (std::size_t round = 0; round < rounds; ++round) {
    const Matrix r = random_matrix(derive_seed(seed, round), 1, n, -1.0, 1.0);
    const Matrix v1 = mat_mul(r, x2, meter);
    const Matrix v2 = mat_mul(v1, x1, meter);
    const Matrix v2r = mat_mul(v2, r_prime, meter);
    double v1_max = 0.0;
    for (double v : v1.data()) v1_max = std::max(v1_max, std::abs(v));
    double residual = max_abs_diff(v1, v2r) / std::max(1.0, v1_max);
    // Overflowed products must fail, and NaN would slip through std::max.
    if (!std::isfinite(residual)) residual = std::numeric_limits<double>::max();
    report.max_residual = std::max(report.max_residual, residual);
    ++report.rounds_run;
  }
  report.passed = report.max_residual <= tol;
  return report;
}

VerificationReport verify(const Matrix& x1, const Matrix& x2, const Matrix& r_prime,
                          std::size_t rounds, double tol, std::uint64_t seed) {
  CostMeter scratch;
  return verify(x1, x2, r_prime, rounds, tol, seed, scratch);
}

std::string report_to_json(const VerificationReport& report) {
  const nlohmann::json j{{"passed", report.passed},
                         {"rounds_run", report.rounds_run},
                         {"max_residual", report.max_residual},
                         {"seed", report.seed}};
  return j.dump(1) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    VerificationReport report;
    report.passed = j.at("passed").get<bool>();
    report.rounds_run = j.at("rounds_run").get<std::size_t>();
    report.max_residual = j.at("max_residual").get<double>();
    report.seed = j.at("seed").get<std::uint64_t>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report json: ") + e.what());
  }
}

}  // namespace efp
