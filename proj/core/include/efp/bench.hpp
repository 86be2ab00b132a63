#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efp/masking.hpp"

namespace efp {

enum class Phase { ProbGen, Compute, Verify, Recover, LocalSolve };

std::string_view phase_name(Phase p);
std::optional<Phase> parse_phase(std::string_view name);

/// One timed phase of one repetition.
struct BenchRow {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  Phase phase = Phase::ProbGen;
  std::size_t rep = 0;
  double wall_ms = 0.0;
  std::uint64_t sm = 0;
  std::uint64_t as = 0;
};

struct Shape {
  std::size_t m = 0;
  std::size_t n = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct BenchConfig {
  std::vector<Shape> sizes;
  std::size_t k = kDefaultOpsPerSide;
  std::size_t reps = 20;
  std::size_t rounds = 1;
  std::uint64_t seed = 0;
  /// Run repetitions of one size concurrently, each with its own meters.
  bool parallel = false;
  /// Restrict timing to these phases; empty means all five.
  std::vector<Phase> phases;
};

/// 2000x1500 up to 5500x5000 in steps of 500, each dimension divided by
/// `scale` (rounded, at least 2).
std::vector<Shape> default_ladder(double scale = 4.0);

/// Parses "2000x1500,2500x2000".
std::vector<Shape> parse_sizes(std::string_view text);

/// Each repetition draws X (entries in [-1, 1)), y and a key from the base
/// seed, then times each requested phase on a monotonic clock. Rows come
/// back ordered by size, repetition, phase.
std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row = {});

/// Exact header: m,n,k,phase,rep,wall_ms,sm,as
std::string_view bench_csv_header();
std::string to_csv(const BenchRow& row);

struct PhaseSummary {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  Phase phase = Phase::ProbGen;
  std::size_t reps = 0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;  ///< sample standard deviation; 0 for a single rep
  double median_ms = 0.0;
  std::uint64_t sm = 0;
  std::uint64_t as = 0;
};

/// Groups rows by (m, n, k, phase), in first-seen order.
std::vector<PhaseSummary> summarize(const std::vector<BenchRow>& rows);

}  // namespace efp
