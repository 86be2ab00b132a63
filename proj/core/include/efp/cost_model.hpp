#pragma once

#include <cstddef>
#include <cstdint>

namespace efp {

struct PhaseCounts {
  std::uint64_t sm = 0;
  std::uint64_t as = 0;
  friend bool operator==(const PhaseCounts&, const PhaseCounts&) = default;
};

// Exact counts produced by this implementation for an m x n design matrix
// and k ops per key side.

/// Scale and add ops on both sides, one permutation per side:
/// SM = 2mn + 2(k-2)m, AS = 2mn.
PhaseCounts probgen_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k);
/// SM = 2mn^2 + n^3, AS = 0.
PhaseCounts compute_counts(std::uint64_t m, std::uint64_t n);
/// SM = 3mn per round.
PhaseCounts verify_counts(std::uint64_t m, std::uint64_t n, std::uint64_t rounds);
/// Row ops on R' then R y: SM = 2mn + (k-2)m, AS = mn.
PhaseCounts recover_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k);
/// R' y first, then row ops on a length-n vector: SM = mn + n + (k-2), AS = n.
PhaseCounts recover_fast_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k);
/// Direct (X^T X)^-1 X^T y: SM = 2mn^2 + n^3 + mn, AS = 0.
PhaseCounts local_solve_counts(std::uint64_t m, std::uint64_t n);

// Counts as published for the original scheme's cost table. They are
// reported next to ours; they do not all agree with direct counting.

PhaseCounts reference_probgen_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k);
PhaseCounts reference_compute_counts(std::uint64_t m, std::uint64_t n);
PhaseCounts reference_verify_counts(std::uint64_t m, std::uint64_t n);
/// Table form kmn + (k-2)n; the accompanying proof text states (k-1)mn + (k-2)n.
PhaseCounts reference_recover_counts(std::uint64_t m, std::uint64_t n, std::uint64_t k);
std::uint64_t reference_recover_sm_text(std::uint64_t m, std::uint64_t n, std::uint64_t k);

/// Published client-to-baseline work ratio
/// (3(k-1)mn + (k-2)(m+2n)) / (m^2 n + n^3 + m n^2).
double reference_efficiency_ratio(std::uint64_t m, std::uint64_t n, std::uint64_t k);

}  // namespace efp
