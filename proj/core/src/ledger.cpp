#include "efp/ledger.hpp"

#include <json.hpp>
#include <limits>
#include <string>
#include <utility>

#include "efp/digest.hpp"
#include "efp/errors.hpp"

namespace efp {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Units checked_add(Units a, Units b) {
  if (b > std::numeric_limits<Units>::max() - a) throw ParameterError("currency overflow");
  return a + b;
}

Units checked_mul(Units a, Units b) {
  if (a != 0 && b > std::numeric_limits<Units>::max() / a) {
    throw ParameterError("currency overflow");
  }
  return a * b;
}

std::string task_str(TaskId id) { return "task " + std::to_string(id); }

json report_json(const std::optional<VerificationReport>& r) {
  if (!r) return nullptr;
  return json{{"passed", r->passed},
              {"rounds_run", r->rounds_run},
              {"max_residual", r->max_residual},
              {"seed", r->seed}};
}

std::optional<VerificationReport> report_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  VerificationReport r;
  r.passed = j.at("passed").get<bool>();
  r.rounds_run = j.at("rounds_run").get<std::size_t>();
  r.max_residual = j.at("max_residual").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

json event_json(const LedgerEvent& event) {
  return std::visit(
      Overloaded{
          [](const AccountOpened& e) {
            return json{{"type", "account_opened"}, {"id", e.id.value}, {"balance", e.balance}};
          },
          [](const TaskSubmitted& e) {
            return json{{"type", "task_submitted"},
                        {"task_id", e.task_id},
                        {"client", e.client.value},
                        {"fee", e.fee},
                        {"problem_hash", e.problem_hash}};
          },
          [](const TaskClaimed& e) {
            return json{{"type", "task_claimed"},
                        {"task_id", e.task_id},
                        {"cloud", e.cloud.value},
                        {"deposit", e.deposit}};
          },
          [](const ResultSubmitted& e) {
            return json{{"type", "result_submitted"},
                        {"task_id", e.task_id},
                        {"result_hash", e.result_hash},
                        {"report", report_json(e.report)},
                        {"flag", e.flag}};
          },
          [](const NoResultReported& e) {
            return json{{"type", "no_result_reported"}, {"task_id", e.task_id}};
          },
      },
      event);
}

LedgerEvent event_from(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "account_opened") {
    return AccountOpened{j.at("id").get<std::string>(), j.at("balance").get<Units>()};
  }
  if (type == "task_submitted") {
    return TaskSubmitted{j.at("task_id").get<TaskId>(), j.at("client").get<std::string>(),
                         j.at("fee").get<Units>(), j.at("problem_hash").get<std::string>()};
  }
  if (type == "task_claimed") {
    return TaskClaimed{j.at("task_id").get<TaskId>(), j.at("cloud").get<std::string>(),
                       j.at("deposit").get<Units>()};
  }
  if (type == "result_submitted") {
    return ResultSubmitted{j.at("task_id").get<TaskId>(), j.at("result_hash").get<std::string>(),
                           report_from(j.at("report")), j.at("flag").get<int>()};
  }
  if (type == "no_result_reported") return NoResultReported{j.at("task_id").get<TaskId>()};
  throw FormatError("unknown ledger event '" + type + "'");
}

}  // namespace

Ledger::Ledger(Units deposit_multiplier) : deposit_multiplier_(deposit_multiplier) {}

void Ledger::open_account(const AccountId& id, Units initial_balance) {
  if (balances_.contains(id)) throw LedgerError("account '" + id.value + "' already exists");
  const Units supply = checked_add(total_supply_, initial_balance);
  balances_.emplace(id, initial_balance);
  total_supply_ = supply;
  events_.emplace_back(AccountOpened{id, initial_balance});
}

TaskId Ledger::submit_task(const AccountId& client, Units fee,
                           std::shared_ptr<const MaskedProblem> mp) {
  if (!mp) throw ParameterError("submit_task: no problem given");
  const auto it = balances_.find(client);
  if (it == balances_.end()) throw LedgerError("unknown client '" + client.value + "'");
  if (it->second < fee) throw LedgerError("client '" + client.value + "' cannot pay the fee");

  TaskRecord rec;
  rec.task_id = next_task_id_;
  rec.client = client;
  rec.service_fee = fee;
  rec.problem_hash = problem_digest(*mp);
  rec.problem = std::move(mp);

  it->second -= fee;
  escrow_ += fee;
  const TaskId id = next_task_id_++;
  events_.emplace_back(TaskSubmitted{id, client, fee, rec.problem_hash});
  tasks_.emplace(id, std::move(rec));
  return id;
}

TaskId Ledger::submit_task(const AccountId& client, Units fee, MaskedProblem mp) {
  return submit_task(client, fee, std::make_shared<const MaskedProblem>(std::move(mp)));
}

void Ledger::claim_task(const AccountId& cloud, TaskId task_id) {
  const auto t = tasks_.find(task_id);
  if (t == tasks_.end()) throw LedgerError("unknown " + task_str(task_id));
  TaskRecord& rec = t->second;
  if (rec.status != TaskStatus::Open) throw LedgerError(task_str(task_id) + " is not open");
  const auto b = balances_.find(cloud);
  if (b == balances_.end()) throw LedgerError("unknown cloud '" + cloud.value + "'");
  const Units deposit = checked_mul(rec.service_fee, deposit_multiplier_);
  if (b->second < deposit) throw LedgerError("cloud '" + cloud.value + "' cannot pay the deposit");

  b->second -= deposit;
  escrow_ += deposit;
  rec.deposit = deposit;
  rec.cloud = cloud;
  rec.status = TaskStatus::Claimed;
  events_.emplace_back(TaskClaimed{task_id, cloud, deposit});
}

TaskRecord& Ledger::claimed_task(TaskId task_id, const char* op) {
  const auto t = tasks_.find(task_id);
  if (t == tasks_.end()) throw LedgerError(std::string(op) + ": unknown " + task_str(task_id));
  if (t->second.status != TaskStatus::Claimed) {
    throw LedgerError(std::string(op) + ": " + task_str(task_id) + " is not claimed");
  }
  return t->second;
}

ResultOutcome Ledger::submit_result(const AccountId& submitter, TaskId task_id, Matrix r_prime,
                                    std::size_t rounds, double tol, std::uint64_t seed) {
  TaskRecord& rec = claimed_task(task_id, "submit_result");
  if (rec.cloud != submitter) {
    throw LedgerError("submit_result: '" + submitter.value + "' did not claim " +
                      task_str(task_id));
  }
  if (!rec.problem) throw LedgerError("submit_result: problem data for " + task_str(task_id) +
                                      " is not loaded");

  ResultOutcome outcome;
  try {
    outcome.report = verify(rec.problem->x1(), rec.problem->x2(), r_prime, rounds, tol, seed);
    outcome.flag = outcome.report->passed ? 1 : 0;
  } catch (const ShapeError&) {
    outcome.flag = 0;
  }

  auto result = std::make_shared<const Matrix>(std::move(r_prime));
  std::string hash = matrix_digest(*result);
  payment(task_id, outcome.flag);
  rec.result = std::move(result);
  rec.result_hash = hash;
  rec.report = outcome.report;
  outcome.status = rec.status;
  events_.emplace_back(ResultSubmitted{task_id, std::move(hash), outcome.report, outcome.flag});
  return outcome;
}

void Ledger::report_no_result(TaskId task_id) {
  claimed_task(task_id, "report_no_result");
  payment(task_id, 0);
  events_.emplace_back(NoResultReported{task_id});
}

void Ledger::payment(TaskId task_id, int flag) {
  if (flag != 0 && flag != 1) throw ParameterError("payment flag must be 0 or 1");
  TaskRecord& rec = claimed_task(task_id, "payment");
  const Units amount = rec.service_fee + rec.deposit;
  if (flag == 1) {
    rec.status = TaskStatus::PaidToCloud;
    credit(*rec.cloud, amount);
  } else {
    rec.status = TaskStatus::Refunded;
    credit(rec.client, amount);
  }
  escrow_ -= amount;
}

void Ledger::credit(const AccountId& id, Units amount) { balances_.at(id) += amount; }

void Ledger::apply(const LedgerEvent& event) {
  std::visit(
      Overloaded{
          [&](const AccountOpened& e) { open_account(e.id, e.balance); },
          [&](const TaskSubmitted& e) {
            if (e.task_id != next_task_id_) throw LedgerError("replay: task id out of sequence");
            const auto it = balances_.find(e.client);
            if (it == balances_.end() || it->second < e.fee) {
              throw LedgerError("replay: submission no longer valid");
            }
            TaskRecord rec;
            rec.task_id = e.task_id;
            rec.client = e.client;
            rec.service_fee = e.fee;
            rec.problem_hash = e.problem_hash;
            it->second -= e.fee;
            escrow_ += e.fee;
            ++next_task_id_;
            tasks_.emplace(e.task_id, std::move(rec));
            events_.emplace_back(e);
          },
          [&](const TaskClaimed& e) {
            const auto t = tasks_.find(e.task_id);
            if (t != tasks_.end() &&
                checked_mul(t->second.service_fee, deposit_multiplier_) != e.deposit) {
              throw LedgerError("replay: deposit does not match the ledger policy");
            }
            claim_task(e.cloud, e.task_id);
          },
          [&](const ResultSubmitted& e) {
            TaskRecord& rec = claimed_task(e.task_id, "replay");
            payment(e.task_id, e.flag);
            rec.result.reset();
            rec.result_hash = e.result_hash;
            rec.report = e.report;
            events_.emplace_back(e);
          },
          [&](const NoResultReported& e) { report_no_result(e.task_id); },
      },
      event);
}

Units Ledger::balance(const AccountId& id) const {
  const auto it = balances_.find(id);
  if (it == balances_.end()) throw LedgerError("unknown account '" + id.value + "'");
  return it->second;
}

const TaskRecord& Ledger::task(TaskId id) const {
  const auto it = tasks_.find(id);
  if (it == tasks_.end()) throw LedgerError("unknown " + task_str(id));
  return it->second;
}

void Ledger::check_invariants() const {
  Units held = escrow_;
  for (const auto& [id, bal] : balances_) held += bal;
  if (held != total_supply_) throw LedgerError("conservation violated");

  Units expected_escrow = 0;
  for (const auto& [id, rec] : tasks_) {
    if (!balances_.contains(rec.client) || (rec.cloud && !balances_.contains(*rec.cloud))) {
      throw LedgerError(task_str(id) + ": references an unknown account");
    }
    if (rec.cloud.has_value() != (rec.status != TaskStatus::Open)) {
      throw LedgerError(task_str(id) + ": cloud presence disagrees with status");
    }
    if (rec.result_hash && !is_terminal(rec.status)) {
      throw LedgerError(task_str(id) + ": result stored on a live task");
    }
    if (rec.status == TaskStatus::Open) expected_escrow += rec.service_fee;
    if (rec.status == TaskStatus::Claimed) expected_escrow += rec.service_fee + rec.deposit;
  }
  if (expected_escrow != escrow_) throw LedgerError("escrow does not match live tasks");
}

std::string Ledger::snapshot_json() const {
  json balances = json::object();
  for (const auto& [id, bal] : balances_) balances[id.value] = bal;
  json tasks = json::array();
  for (const auto& [id, rec] : tasks_) {
    tasks.push_back(json{
        {"task_id", rec.task_id},
        {"client", rec.client.value},
        {"cloud", rec.cloud ? json(rec.cloud->value) : json(nullptr)},
        {"fee", rec.service_fee},
        {"deposit", rec.deposit},
        {"status", static_cast<int>(rec.status)},
        {"problem_hash", rec.problem_hash},
        {"result_hash", rec.result_hash ? json(*rec.result_hash) : json(nullptr)},
        {"report", report_json(rec.report)},
    });
  }
  const json j{{"deposit_multiplier", deposit_multiplier_},
               {"next_task_id", next_task_id_},
               {"balances", std::move(balances)},
               {"escrow", escrow_},
               {"tasks", std::move(tasks)}};
  return j.dump(1) + "\n";
}

Ledger Ledger::from_snapshot_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    Ledger ledger(j.at("deposit_multiplier").get<Units>());
    ledger.next_task_id_ = j.at("next_task_id").get<TaskId>();
    for (const auto& [id, bal] : j.at("balances").items()) {
      ledger.balances_.emplace(AccountId(id), bal.get<Units>());
      ledger.total_supply_ = checked_add(ledger.total_supply_, bal.get<Units>());
    }
    ledger.escrow_ = j.at("escrow").get<Units>();
    ledger.total_supply_ = checked_add(ledger.total_supply_, ledger.escrow_);
    for (const auto& t : j.at("tasks")) {
      TaskRecord rec;
      rec.task_id = t.at("task_id").get<TaskId>();
      rec.client = t.at("client").get<std::string>();
      if (!t.at("cloud").is_null()) rec.cloud = t.at("cloud").get<std::string>();
      rec.service_fee = t.at("fee").get<Units>();
      rec.deposit = t.at("deposit").get<Units>();
      const int status = t.at("status").get<int>();
      if (status < 0 || status > 3) throw FormatError("snapshot: bad task status");
      rec.status = static_cast<TaskStatus>(status);
      rec.problem_hash = t.at("problem_hash").get<std::string>();
      if (!t.at("result_hash").is_null()) rec.result_hash = t.at("result_hash").get<std::string>();
      rec.report = report_from(t.at("report"));
      if (rec.task_id >= ledger.next_task_id_) throw FormatError("snapshot: task id too large");
      if (!ledger.tasks_.emplace(rec.task_id, std::move(rec)).second) {
        throw FormatError("snapshot: duplicate task id");
      }
    }
    ledger.check_invariants();
    return ledger;
  } catch (const json::exception& e) {
    throw FormatError(std::string("snapshot json: ") + e.what());
  } catch (const LedgerError& e) {
    throw FormatError(std::string("snapshot inconsistent: ") + e.what());
  }
}

std::string events_to_json(const std::vector<LedgerEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(event_json(e));
  return arr.dump(1) + "\n";
}

std::vector<LedgerEvent> events_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    std::vector<LedgerEvent> out;
    for (const auto& e : j) out.push_back(event_from(e));
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("event log json: ") + e.what());
  }
}

}  // namespace efp
