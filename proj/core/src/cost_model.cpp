#include "efp/cost_model.hpp"

namespace efp {

PhaseCounts probgen_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return {2 * m * n + 2 * (k - 2) * m, 2 * m * n};
}

PhaseCounts compute_counts(std::uint64_t m, std::uint64_t n) {
  return {2 * m * n * n + n * n * n, 0};
}

PhaseCounts verify_counts(std::uint64_t m, std::uint64_t n, std::uint64_t rounds) {
  return {3 * m * n * rounds, 0};
}

PhaseCounts recover_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return {2 * m * n + (k - 2) * m, m * n};
}

PhaseCounts recover_fast_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return {m * n + n + (k - 2), n};
}

PhaseCounts local_solve_counts(std::uint64_t m, std::uint64_t n) {
  return {2 * m * n * n + n * n * n + m * n, 0};
}

PhaseCounts reference_probgen_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return {2 * (k - 1) * m * n + (k - 2) * (m + n), 2 * m * n};
}

PhaseCounts reference_compute_counts(std::uint64_t m, std::uint64_t n) {
  return {m * m * n + n * n * n + m * n * n, 0};
}

PhaseCounts reference_verify_counts(std::uint64_t m, std::uint64_t n) { return {3 * m * n, 0}; }

PhaseCounts reference_recover_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return {k * m * n + (k - 2) * n, m * n};
}

std::uint64_t reference_recover_sm_text(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  return (k - 1) * m * n + (k - 2) * n;
}

double reference_efficiency_ratio(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
  const double md = static_cast<double>(m), nd = static_cast<double>(n),
               kd = static_cast<double>(k);
  return (3 * (kd - 1) * md * nd + (kd - 2) * (md + 2 * nd)) /
         (md * md * nd + nd * nd * nd + md * nd * nd);
}

}  // namespace efp
