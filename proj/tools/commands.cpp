#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "efp/bench.hpp"
#include "efp/cost_model.hpp"
#include "efp/errors.hpp"
#include "efp/ledger.hpp"
#include "efp/masking.hpp"
#include "efp/protocol.hpp"
#include "efp/rng.hpp"
#include "efp/text_io.hpp"
#include "efp/verifier.hpp"

namespace efp::cli {
namespace {

template <class T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::string describe(const CloudBehavior& b) {
  if (std::holds_alternative<Honest>(b)) return "honest";
  if (const auto* r = std::get_if<RandomResult>(&b)) return "random:" + std::to_string(r->seed);
  if (const auto* p = std::get_if<PerturbOne>(&b)) {
    return "perturb:" + std::to_string(p->row) + "," + std::to_string(p->col) + "," +
           format_scalar(p->delta);
  }
  return "truncate:" + std::to_string(std::get<Truncated>(b).keep_rows);
}

const char* status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::Open: return "open";
    case TaskStatus::Claimed: return "claimed";
    case TaskStatus::PaidToCloud: return "paid-to-cloud";
    case TaskStatus::Refunded: return "refunded-to-client";
  }
  return "?";
}

struct Options {
  // keygen
  std::size_t n = 0;
  std::size_t k = kDefaultOpsPerSide;
  std::uint64_t seed = 0;
  std::string out;
  // mask
  std::string matrix, key, out1, out2;
  // compute / verify
  std::string in1, in2, result, adversary = "honest";
  std::size_t rounds = kDefaultRounds;
  double tol = kDefaultTolerance;
  // recover / solve
  std::string y;
  bool fast = false;
  // demo
  std::size_t m = 0;
  std::uint64_t fee = 5;
  std::uint64_t balance = 100;
  std::string snapshot, events;
  // bench
  std::string sizes, csv, phases;
  double scale = 4.0;
  std::size_t reps = 20;
  bool parallel = false;
};

int cmd_keygen(const Options& o, std::ostream& out) {
  const SecretKey sk = keygen(o.n, o.k, o.seed);
  write_file(o.out, key_to_json(sk));
  out << "wrote key n=" << sk.n() << " k=" << sk.k() << " to " << o.out << "\n";
  return kOk;
}

int cmd_mask(const Options& o, std::ostream& out) {
  const Matrix x = parse_matrix(read_file(o.matrix));
  const SecretKey sk = key_from_json(read_file(o.key));
  CostMeter meter;
  const MaskedProblem mp = probgen(x, sk, meter);
  write_file(o.out1, format_matrix(mp.x1()));
  write_file(o.out2, format_matrix(mp.x2()));
  out << "masked " << x.rows() << "x" << x.cols() << " (sm=" << meter.sm()
      << " as=" << meter.as() << ")\n";
  return kOk;
}

int cmd_compute(const Options& o, std::ostream& out, std::ostream& err) {
  const MaskedProblem mp(parse_matrix(read_file(o.in1)), parse_matrix(read_file(o.in2)));
  const CloudBehavior behavior = parse_adversary(o.adversary);
  CostMeter meter;
  try {
    const Matrix r = compute_with_behavior(mp, behavior, meter);
    write_file(o.out, format_matrix(r));
    out << "computed " << r.rows() << "x" << r.cols() << " result (" << describe(behavior)
        << ", sm=" << meter.sm() << ")\n";
    return kOk;
  } catch (const SingularMatrixError& e) {
    err << "no result: " << e.what() << "\n";
    return kNoResult;
  }
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Matrix x1 = parse_matrix(read_file(o.in1));
  const Matrix x2 = parse_matrix(read_file(o.in2));
  const Matrix r = parse_matrix(read_file(o.result));
  const VerificationReport report = verify(x1, x2, r, o.rounds, o.tol, o.seed);
  const std::string json = report_to_json(report);
  if (o.out.empty()) {
    out << json;
  } else {
    write_file(o.out, json);
    out << (report.passed ? "verified" : "rejected") << " (residual "
        << format_scalar(report.max_residual) << ")\n";
  }
  return report.passed ? kOk : kVerificationFailed;
}

int cmd_recover(const Options& o, std::ostream& out) {
  const SecretKey sk = key_from_json(read_file(o.key));
  const Matrix r = parse_matrix(read_file(o.result));
  const Vector y = parse_vector(read_file(o.y));
  CostMeter meter;
  const Vector w = o.fast ? recover_weights_fast(sk, r, y, meter) : recover(sk, r, y, meter).weights;
  write_file(o.out, format_vector(w));
  out << "recovered " << w.size() << " weights (sm=" << meter.sm() << " as=" << meter.as()
      << ")\n";
  return kOk;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Matrix x = parse_matrix(read_file(o.matrix));
  const Vector y = parse_vector(read_file(o.y));
  CostMeter meter;
  try {
    const Vector w = local_solve(x, y, meter);
    write_file(o.out, format_vector(w));
    out << "solved locally (sm=" << meter.sm() << ")\n";
    return kOk;
  } catch (const SingularMatrixError& e) {
    err << "no result: " << e.what() << "\n";
    return kNoResult;
  }
}

int cmd_demo(const Options& o, std::ostream& out) {
  if (o.m < o.n) throw ParameterError("demo needs m >= n");
  const CloudBehavior behavior = parse_adversary(o.adversary);
  const Matrix x = random_matrix(derive_seed(o.seed, 0), o.m, o.n, -1.0, 1.0);
  const Vector y = random_vector(derive_seed(o.seed, 1), o.m, -1.0, 1.0);
  const AccountId client{"client"}, cloud{"cloud"};

  Ledger ledger;
  ledger.open_account(client, o.balance);
  ledger.open_account(cloud, o.balance);
  out << "accounts: client=" << o.balance << " cloud=" << o.balance << "\n";

  CostMeter client_meter;
  const SecretKey sk = keygen(o.n, o.k, derive_seed(o.seed, 2));
  auto mp = std::make_shared<const MaskedProblem>(probgen(x, sk, client_meter));
  out << "client: masked " << o.m << "x" << o.n << " design matrix with k=" << o.k
      << " ops per side (sm=" << client_meter.sm() << " as=" << client_meter.as() << ")\n";

  const TaskId id = ledger.submit_task(client, o.fee, mp);
  out << "client: submitted task " << id << " with fee " << o.fee << " (escrow "
      << ledger.escrow() << ")\n";
  ledger.claim_task(cloud, id);
  out << "cloud: claimed task " << id << " with deposit " << ledger.task(id).deposit
      << " (escrow " << ledger.escrow() << ")\n";

  int code = kOk;
  CostMeter cloud_meter;
  std::optional<Matrix> r_prime;
  try {
    r_prime.emplace(compute_with_behavior(*mp, behavior, cloud_meter));
    out << "cloud: computed result as " << describe(behavior) << " (sm=" << cloud_meter.sm()
        << ")\n";
  } catch (const SingularMatrixError& e) {
    out << "cloud: no result (" << e.what() << ")\n";
  }

  if (r_prime) {
    const Matrix kept = *r_prime;
    const ResultOutcome res =
        ledger.submit_result(cloud, id, std::move(*r_prime), o.rounds, o.tol, derive_seed(o.seed, 3));
    if (res.report) {
      out << "platform: verification " << (res.report->passed ? "passed" : "failed")
          << " (residual " << format_scalar(res.report->max_residual) << ", rounds "
          << res.report->rounds_run << ")\n";
    } else {
      out << "platform: result has the wrong shape, treated as failed\n";
    }
    out << "platform: payment flag " << res.flag << ", task status "
        << static_cast<int>(res.status) << " (" << status_name(res.status) << ")\n";
    if (res.flag == 1) {
      const Vector w = recover(sk, kept, y, client_meter).weights;
      CostMeter local;
      const Vector reference = local_solve(x, y, local);
      const double diff = max_abs_diff(w, reference) / std::max(1.0, reference.norm_inf());
      out << "client: recovered weights, relative difference to local solve "
          << format_scalar(diff) << "\n";
    } else {
      code = kVerificationFailed;
    }
  } else {
    ledger.report_no_result(id);
    out << "platform: no result, task status " << static_cast<int>(ledger.task(id).status) << " ("
        << status_name(ledger.task(id).status) << ")\n";
    code = kNoResult;
  }

  ledger.check_invariants();
  out << "balances: client=" << ledger.balance(client) << " cloud=" << ledger.balance(cloud)
      << " escrow=" << ledger.escrow() << "\n";
  if (!o.snapshot.empty()) write_file(o.snapshot, ledger.snapshot_json());
  if (!o.events.empty()) write_file(o.events, events_to_json(ledger.events()));
  return code;
}

void print_counts_table(const std::vector<PhaseSummary>& summaries, std::size_t rounds,
                        std::ostream& out) {
  out << "\nphase counts (ours vs reference formula)\n";
  for (const auto& s : summaries) {
    PhaseCounts ref{};
    std::string extra;
    switch (s.phase) {
      case Phase::ProbGen: ref = reference_probgen_counts(s.m, s.n, s.k); break;
      case Phase::Compute: ref = reference_compute_counts(s.m, s.n); break;
      case Phase::Verify: {
        ref = reference_verify_counts(s.m, s.n);
        ref.sm *= rounds;
        break;
      }
      case Phase::Recover:
        ref = reference_recover_counts(s.m, s.n, s.k);
        extra = " (text form sm=" + std::to_string(reference_recover_sm_text(s.m, s.n, s.k)) + ")";
        break;
      case Phase::LocalSolve: continue;
    }
    out << "  " << s.m << "x" << s.n << " " << std::left << std::setw(8) << phase_name(s.phase)
        << std::right << " sm=" << s.sm << " as=" << s.as << "   reference sm=" << ref.sm
        << " as=" << ref.as << extra << "\n";
  }
}

void print_op_comparison(const Options& o, const std::vector<Shape>& sizes, std::ostream& out) {
  out << "\nelementary op timing (column ops on X, mean of " << o.reps << " reps)\n";
  for (const auto& s : sizes) {
    const Matrix x = random_matrix(derive_seed(o.seed, 99), s.m, s.n, -1.0, 1.0);
    const SecretKey sk = keygen(s.n, kMinOpsPerSide, derive_seed(o.seed, 98));
    const char* names[] = {"scale", "permute", "add"};
    const ElementaryOp* ops[] = {&sk.p_ops()[0], &sk.p_ops()[1], &sk.p_ops()[2]};
    out << "  " << s.m << "x" << s.n;
    for (int i = 0; i < 3; ++i) {
      CostMeter meter;
      double total = 0.0;
      for (std::size_t rep = 0; rep < o.reps; ++rep) {
        Matrix work = x;
        const auto t0 = std::chrono::steady_clock::now();
        work = apply_column_op(std::move(work), *ops[i], meter);
        total += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
      }
      out << "  " << names[i] << "=" << format_scalar(total / static_cast<double>(o.reps))
          << "ms";
    }
    out << "\n";
  }
  out << "  (a single add op touches one column: m SM, versus mn SM for a full scale op)\n";
}

int cmd_bench(const Options& o, std::ostream& out) {
  BenchConfig cfg;
  cfg.sizes = o.sizes.empty() ? default_ladder(o.scale) : parse_sizes(o.sizes);
  cfg.k = o.k;
  cfg.reps = o.reps;
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  cfg.parallel = o.parallel;
  if (!o.phases.empty()) {
    std::stringstream ss(o.phases);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto p = parse_phase(item);
      if (!p) throw ParameterError("unknown phase '" + item + "'");
      cfg.phases.push_back(*p);
    }
  }

  std::ofstream csv_file;
  std::ostream* csv = &out;
  if (!o.csv.empty()) {
    csv_file.open(o.csv, std::ios::trunc);
    if (!csv_file) throw FormatError("cannot write " + o.csv);
    csv = &csv_file;
  }
  *csv << bench_csv_header() << "\n";
  const auto rows = run_bench(cfg, [&](const BenchRow& row) { *csv << to_csv(row) << "\n"; });
  csv->flush();
  if (o.csv.empty()) return kOk;

  const auto summaries = summarize(rows);
  out << "phase timings (mean / sample stddev / median over " << cfg.reps << " reps, ms)\n";
  for (const auto& s : summaries) {
    out << "  " << s.m << "x" << s.n << " k=" << s.k << " " << std::left << std::setw(10)
        << phase_name(s.phase) << std::right << " " << format_scalar(s.mean_ms) << " / "
        << format_scalar(s.stddev_ms) << " / " << format_scalar(s.median_ms) << "\n";
  }
  print_counts_table(summaries, cfg.rounds, out);
  print_op_comparison(o, cfg.sizes, out);
  return kOk;
}

}  // namespace

CloudBehavior parse_adversary(const std::string& text) {
  if (text == "honest") return Honest{};
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string::npos ? std::string_view{} : std::string_view(text).substr(colon + 1);
  if (kind == "random") return RandomResult{parse_number<std::uint64_t>(rest, "random seed")};
  if (kind == "truncate") return Truncated{parse_number<std::size_t>(rest, "truncate rows")};
  if (kind == "perturb") {
    const auto c1 = rest.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParameterError("perturb needs ROW,COL,DELTA");
    PerturbOne p;
    p.row = parse_number<std::size_t>(rest.substr(0, c1), "perturb row");
    p.col = parse_number<std::size_t>(rest.substr(c1 + 1, c2 - c1 - 1), "perturb col");
    p.delta = parse_number<double>(rest.substr(c2 + 1), "perturb delta");
    if (p.delta == 0.0) throw ParameterError("perturb delta must be non-zero");
    return p;
  }
  throw ParameterError("unknown adversary '" + text + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verifiable outsourcing of linear regression with escrowed payment", "efp"};
  app.require_subcommand(1);
  Options o;

  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Deterministic seed")->envname("EFP_SEED");
  };

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a secret key (.sk.json)");
  keygen_cmd->add_option("--n", o.n, "Column count of the design matrix")->required();
  keygen_cmd->add_option("--k", o.k, "Ops per key side (>= 4)");
  add_seed(keygen_cmd);
  keygen_cmd->add_option("--out", o.out, "Key file")->required();

  auto* mask_cmd = app.add_subcommand("mask", "Blind a design matrix into X1, X2");
  mask_cmd->add_option("--matrix", o.matrix, "Design matrix file")->required();
  mask_cmd->add_option("--key", o.key, "Key file")->required();
  mask_cmd->add_option("--out1", o.out1, "X1 output")->required();
  mask_cmd->add_option("--out2", o.out2, "X2 output")->required();

  auto* compute_cmd = app.add_subcommand("compute", "Worker: R' = (X2 X1)^-1 X2");
  compute_cmd->add_option("--in1", o.in1, "X1 file")->required();
  compute_cmd->add_option("--in2", o.in2, "X2 file")->required();
  compute_cmd->add_option("--out", o.out, "Result file")->required();
  compute_cmd->add_option("--adversary", o.adversary,
                          "honest | random:SEED | perturb:R,C,D | truncate:ROWS");

  auto* verify_cmd = app.add_subcommand("verify", "Public random-vector check of a result");
  verify_cmd->add_option("--in1", o.in1, "X1 file")->required();
  verify_cmd->add_option("--in2", o.in2, "X2 file")->required();
  verify_cmd->add_option("--result", o.result, "Result file")->required();
  verify_cmd->add_option("--rounds", o.rounds, "Random vectors to test");
  verify_cmd->add_option("--tol", o.tol, "Relative residual tolerance");
  add_seed(verify_cmd);
  verify_cmd->add_option("--out", o.out, "Report file (JSON); stdout if omitted");

  auto* recover_cmd = app.add_subcommand("recover", "Client: unmask R' and compute weights");
  recover_cmd->add_option("--key", o.key, "Key file")->required();
  recover_cmd->add_option("--result", o.result, "Result file")->required();
  recover_cmd->add_option("--y", o.y, "Target vector file")->required();
  recover_cmd->add_option("--out", o.out, "Weights output")->required();
  recover_cmd->add_flag("--fast", o.fast, "Unmask R' y instead of R'");

  auto* solve_cmd = app.add_subcommand("solve", "Local normal-equations solve (baseline)");
  solve_cmd->add_option("--matrix", o.matrix, "Design matrix file")->required();
  solve_cmd->add_option("--y", o.y, "Target vector file")->required();
  solve_cmd->add_option("--out", o.out, "Weights output")->required();

  auto* demo_cmd = app.add_subcommand("demo", "End-to-end run through the escrow ledger");
  demo_cmd->add_option("--m", o.m, "Rows")->required();
  demo_cmd->add_option("--n", o.n, "Columns")->required();
  demo_cmd->add_option("--k", o.k, "Ops per key side");
  demo_cmd->add_option("--fee", o.fee, "Service fee in units");
  demo_cmd->add_option("--balance", o.balance, "Starting balance of both parties");
  demo_cmd->add_option("--adversary", o.adversary, "Worker behavior");
  demo_cmd->add_option("--rounds", o.rounds, "Verification rounds");
  demo_cmd->add_option("--tol", o.tol, "Verification tolerance");
  add_seed(demo_cmd);
  demo_cmd->add_option("--snapshot", o.snapshot, "Write the final ledger snapshot here");
  demo_cmd->add_option("--events", o.events, "Write the ledger event log here");

  auto* bench_cmd = app.add_subcommand("bench", "Phase timing sweep (CSV)");
  bench_cmd->add_option("--sizes", o.sizes, "Comma-separated MxN list; default ladder if omitted");
  bench_cmd->add_option("--scale", o.scale, "Divide default ladder dimensions by this (1 = full)");
  bench_cmd->add_option("--k", o.k, "Ops per key side");
  bench_cmd->add_option("--reps", o.reps, "Repetitions per size");
  bench_cmd->add_option("--rounds", o.rounds, "Verification rounds");
  add_seed(bench_cmd);
  bench_cmd->add_option("--csv", o.csv, "CSV output; stdout if omitted");
  bench_cmd->add_option("--phases", o.phases, "Comma-separated subset of phases");
  bench_cmd->add_flag("--parallel", o.parallel, "Run repetitions concurrently");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n" << app.help();
    return kUsageError;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(o, out);
    if (*mask_cmd) return cmd_mask(o, out);
    if (*compute_cmd) return cmd_compute(o, out, err);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*recover_cmd) return cmd_recover(o, out);
    if (*solve_cmd) return cmd_solve(o, out, err);
    if (*demo_cmd) return cmd_demo(o, out);
    if (*bench_cmd) return cmd_bench(o, out);
  } catch (const SingularMatrixError& e) {
    err << "no result: " << e.what() << "\n";
    return kNoResult;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace efp::cli
