#include "efp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <future>
#include <map>
#include <tuple>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "efp/cloud_worker.hpp"
#include "efp/errors.hpp"
#include "efp/protocol.hpp"
#include "efp/rng.hpp"
#include "efp/text_io.hpp"
#include "efp/verifier.hpp"

namespace efp {
namespace {

// Keep freed matrices in the heap instead of returning them to the OS, so
// repetitions measure arithmetic rather than first-touch page faults. Without
// this, timings jump wherever glibc's trim heuristics happen to kick in.
void keep_heap_resident() {
#if defined(__GLIBC__)
  static const bool done = [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)done;
#endif
}

constexpr Phase kAllPhases[] = {Phase::ProbGen, Phase::Compute, Phase::Verify, Phase::Recover,
                                Phase::LocalSolve};

template <class F>
BenchRow timed(const Shape& s, std::size_t k, Phase phase, std::size_t rep, F&& body) {
  CostMeter meter;
  const auto start = std::chrono::steady_clock::now();
  body(meter);
  const auto stop = std::chrono::steady_clock::now();
  BenchRow row;
  row.m = s.m;
  row.n = s.n;
  row.k = k;
  row.phase = phase;
  row.rep = rep;
  row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  row.sm = meter.sm();
  row.as = meter.as();
  return row;
}

std::vector<BenchRow> run_rep(const BenchConfig& cfg, const Shape& s, std::size_t size_index,
                              std::size_t rep) {
  const std::uint64_t rep_seed = derive_seed(derive_seed(cfg.seed, size_index), rep);
  const Matrix x = random_matrix(derive_seed(rep_seed, 0), s.m, s.n, -1.0, 1.0);
  const Vector y = random_vector(derive_seed(rep_seed, 1), s.m, -1.0, 1.0);
  const SecretKey sk = keygen(s.n, cfg.k, derive_seed(rep_seed, 2));
  const auto& phases = cfg.phases.empty() ? std::vector<Phase>(std::begin(kAllPhases),
                                                               std::end(kAllPhases))
                                          : cfg.phases;
  const auto wants = [&](Phase p) { return std::find(phases.begin(), phases.end(), p) != phases.end(); };
  const bool need_result = wants(Phase::Compute) || wants(Phase::Verify) || wants(Phase::Recover);

  std::vector<BenchRow> rows;
  std::optional<MaskedProblem> mp;
  std::optional<Matrix> r_prime;

  if (wants(Phase::ProbGen) || need_result) {
    BenchRow row = timed(s, cfg.k, Phase::ProbGen, rep,
                         [&](CostMeter& meter) { mp.emplace(probgen(x, sk, meter)); });
    if (wants(Phase::ProbGen)) rows.push_back(row);
  }
  if (need_result) {
    BenchRow row = timed(s, cfg.k, Phase::Compute, rep,
                         [&](CostMeter& meter) { r_prime.emplace(compute(*mp, meter)); });
    if (wants(Phase::Compute)) rows.push_back(row);
  }
  if (wants(Phase::Verify)) {
    rows.push_back(timed(s, cfg.k, Phase::Verify, rep, [&](CostMeter& meter) {
      const auto report =
          verify(mp->x1(), mp->x2(), *r_prime, cfg.rounds, kDefaultTolerance, rep_seed, meter);
      if (!report.passed) throw Error("bench: honest result failed verification");
    }));
  }
  if (wants(Phase::Recover)) {
    rows.push_back(timed(s, cfg.k, Phase::Recover, rep,
                         [&](CostMeter& meter) { (void)recover(sk, *r_prime, y, meter); }));
  }
  if (wants(Phase::LocalSolve)) {
    rows.push_back(timed(s, cfg.k, Phase::LocalSolve, rep,
                         [&](CostMeter& meter) { (void)local_solve(x, y, meter); }));
  }
  return rows;
}

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::ProbGen: return "ProbGen";
    case Phase::Compute: return "Compute";
    case Phase::Verify: return "Verify";
    case Phase::Recover: return "Recover";
    case Phase::LocalSolve: return "LocalSolve";
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view name) {
  for (Phase p : kAllPhases) {
    if (phase_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<Shape> default_ladder(double scale) {
  if (!(scale > 0.0)) throw ParameterError("ladder scale must be positive");
  std::vector<Shape> out;
  for (std::size_t step = 0; step < 8; ++step) {
    const double m = (2000.0 + 500.0 * static_cast<double>(step)) / scale;
    const double n = (1500.0 + 500.0 * static_cast<double>(step)) / scale;
    out.push_back({std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(m))),
                   std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(n)))});
  }
  return out;
}

std::vector<Shape> parse_sizes(std::string_view text) {
  std::vector<Shape> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto x = item.find('x');
    if (x == std::string_view::npos) throw ParameterError("size must look like MxN");
    Shape s;
    const auto parse = [](std::string_view t, std::size_t& v) {
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      return ec == std::errc{} && ptr == t.data() + t.size() && v >= 2;
    };
    if (!parse(item.substr(0, x), s.m) || !parse(item.substr(x + 1), s.n)) {
      throw ParameterError("bad size '" + std::string(item) + "'");
    }
    if (s.m < s.n) throw ParameterError("size '" + std::string(item) + "' has fewer rows than columns");
    out.push_back(s);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ParameterError("no sizes given");
  return out;
}

std::vector<BenchRow> run_bench(const BenchConfig& config,
                                const std::function<void(const BenchRow&)>& on_row) {
  if (config.reps == 0) throw ParameterError("bench needs at least one repetition");
  keep_heap_resident();
  std::vector<BenchRow> all;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const Shape& s = config.sizes[si];
    if (s.m < s.n) throw ParameterError("bench sizes need m >= n");
    std::vector<std::vector<BenchRow>> per_rep(config.reps);
    if (config.parallel) {
      std::vector<std::future<std::vector<BenchRow>>> jobs;
      for (std::size_t rep = 0; rep < config.reps; ++rep) {
        jobs.push_back(std::async(std::launch::async, run_rep, std::cref(config), std::cref(s),
                                  si, rep));
      }
      for (std::size_t rep = 0; rep < config.reps; ++rep) per_rep[rep] = jobs[rep].get();
    } else {
      for (std::size_t rep = 0; rep < config.reps; ++rep) per_rep[rep] = run_rep(config, s, si, rep);
    }
    for (auto& rows : per_rep) {
      for (auto& row : rows) {
        if (on_row) on_row(row);
        all.push_back(row);
      }
    }
  }
  return all;
}

std::string_view bench_csv_header() { return "m,n,k,phase,rep,wall_ms,sm,as"; }

std::string to_csv(const BenchRow& row) {
  std::string out;
  out += std::to_string(row.m) + ',' + std::to_string(row.n) + ',' + std::to_string(row.k) + ',';
  out += phase_name(row.phase);
  out += ',' + std::to_string(row.rep) + ',' + format_scalar(row.wall_ms) + ',';
  out += std::to_string(row.sm) + ',' + std::to_string(row.as);
  return out;
}

std::vector<PhaseSummary> summarize(const std::vector<BenchRow>& rows) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, Phase>;
  std::vector<Key> order;
  std::map<Key, std::vector<const BenchRow*>> groups;
  for (const auto& row : rows) {
    const Key key{row.m, row.n, row.k, row.phase};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<PhaseSummary> out;
  for (const auto& key : order) {
    const auto& group = groups[key];
    PhaseSummary s;
    std::tie(s.m, s.n, s.k, s.phase) = key;
    s.reps = group.size();
    std::vector<double> times;
    for (const auto* r : group) times.push_back(r->wall_ms);
    double sum = 0.0;
    for (double t : times) sum += t;
    s.mean_ms = sum / static_cast<double>(times.size());
    if (times.size() > 1) {
      double ss = 0.0;
      for (double t : times) ss += (t - s.mean_ms) * (t - s.mean_ms);
      s.stddev_ms = std::sqrt(ss / static_cast<double>(times.size() - 1));
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    s.median_ms = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    s.sm = group.front()->sm;
    s.as = group.front()->as;
    out.push_back(s);
  }
  return out;
}

}  // namespace efp
