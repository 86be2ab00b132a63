#include "efp/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "efp/errors.hpp"

namespace efp {
namespace {

TEST(BenchTest, CsvHeaderAndRow) {
  EXPECT_EQ(bench_csv_header(), "m,n,k,phase,rep,wall_ms,sm,as");
  const BenchRow row{30, 20, 8, Phase::Verify, 2, 1.5, 1800, 0};
  EXPECT_EQ(to_csv(row), "30,20,8,Verify,2,1.5,1800,0");
}

TEST(BenchTest, PhaseNames) {
  for (Phase p : {Phase::ProbGen, Phase::Compute, Phase::Verify, Phase::Recover,
                  Phase::LocalSolve}) {
    EXPECT_EQ(parse_phase(phase_name(p)), p);
  }
  EXPECT_FALSE(parse_phase("Train").has_value());
}

TEST(BenchTest, Sizes) {
  const auto ladder = default_ladder(1.0);
  ASSERT_EQ(ladder.size(), 8u);
  EXPECT_EQ(ladder.front(), (Shape{2000, 1500}));
  EXPECT_EQ(ladder.back(), (Shape{5500, 5000}));
  EXPECT_EQ(default_ladder(4.0).front(), (Shape{500, 375}));
  EXPECT_EQ(parse_sizes("40x30,8x3"), (std::vector<Shape>{{40, 30}, {8, 3}}));
  EXPECT_THROW(parse_sizes("40by30"), ParameterError);
  EXPECT_THROW(parse_sizes("3x8"), ParameterError);
}

TEST(BenchTest, RunProducesExactCounts) {
  BenchConfig cfg;
  cfg.sizes = {{30, 12}, {20, 20}};
  cfg.k = 6;
  cfg.reps = 3;
  cfg.rounds = 2;
  cfg.seed = 5;
  std::size_t streamed = 0;
  const auto rows = run_bench(cfg, [&](const BenchRow&) { ++streamed; });
  ASSERT_EQ(rows.size(), 2u * 3 * 5);
  EXPECT_EQ(streamed, rows.size());
  for (const auto& r : rows) {
    EXPECT_GE(r.wall_ms, 0.0);
    if (r.phase == Phase::Verify) EXPECT_EQ(r.sm, 3u * r.m * r.n * 2);
    if (r.phase == Phase::ProbGen) EXPECT_EQ(r.sm, 2u * r.m * r.n + 2u * 4 * r.m);
  }
  const auto summary = summarize(rows);
  ASSERT_EQ(summary.size(), 10u);
  EXPECT_EQ(summary[0].reps, 3u);
}

TEST(BenchTest, PhaseFilterAndParallelAgreeOnCounts) {
  BenchConfig cfg;
  cfg.sizes = {{25, 10}};
  cfg.reps = 4;
  cfg.phases = {Phase::Recover, Phase::LocalSolve};
  const auto serial = run_bench(cfg);
  cfg.parallel = true;
  const auto parallel = run_bench(cfg);
  ASSERT_EQ(serial.size(), 8u);
  ASSERT_EQ(parallel.size(), 8u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].phase, parallel[i].phase);
    EXPECT_EQ(serial[i].rep, parallel[i].rep);
    EXPECT_EQ(serial[i].sm, parallel[i].sm);
  }
}

TEST(BenchTest, SummaryStatistics) {
  std::vector<BenchRow> rows;
  for (double ms : {1.0, 2.0, 4.0, 9.0}) rows.push_back({10, 5, 8, Phase::Compute, 0, ms, 1, 0});
  rows.push_back({10, 5, 8, Phase::Verify, 0, 3.0, 2, 0});
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].phase, Phase::Compute);
  EXPECT_DOUBLE_EQ(s[0].mean_ms, 4.0);
  EXPECT_DOUBLE_EQ(s[0].median_ms, 3.0);
  EXPECT_NEAR(s[0].stddev_ms, std::sqrt(38.0 / 3.0), 1e-12);
  EXPECT_EQ(s[1].stddev_ms, 0.0);
}

}  // namespace
}  // namespace efp
