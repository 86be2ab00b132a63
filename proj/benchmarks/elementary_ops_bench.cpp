#include <benchmark/benchmark.h>

#include "efp/masking.hpp"

namespace {

using efp::AddMultiple;
using efp::CostMeter;
using efp::ElementaryOp;
using efp::Matrix;

ElementaryOp make_op(int kind, std::size_t n) {
  if (kind == 0) return efp::ScaleAll{std::vector<double>(n, -1.0)};
  if (kind == 1) {
    efp::Permute p;
    for (std::size_t i = 0; i < n; ++i) p.perm.push_back((i + 1) % n);
    return p;
  }
  return AddMultiple{0, n - 1, -1.0};
}

void BM_ColumnOp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int kind = static_cast<int>(state.range(1));
  const ElementaryOp op = make_op(kind, n);
  Matrix x = efp::random_matrix(1, n, n, -1, 1);
  CostMeter meter;
  for (auto _ : state) {
    x = efp::apply_column_op(std::move(x), op, meter);
    benchmark::DoNotOptimize(x.data().data());
  }
  state.SetLabel(kind == 0 ? "scale" : kind == 1 ? "permute" : "add");
}

void BM_RowOp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int kind = static_cast<int>(state.range(1));
  const ElementaryOp op = make_op(kind, n);
  Matrix x = efp::random_matrix(2, n, n, -1, 1);
  CostMeter meter;
  for (auto _ : state) {
    x = efp::apply_row_op(std::move(x), op, meter);
    benchmark::DoNotOptimize(x.data().data());
  }
  state.SetLabel(kind == 0 ? "scale" : kind == 1 ? "permute" : "add");
}

BENCHMARK(BM_ColumnOp)->ArgsProduct({{250, 500, 1000}, {0, 1, 2}});
BENCHMARK(BM_RowOp)->ArgsProduct({{250, 500, 1000}, {0, 1, 2}});

}  // namespace
