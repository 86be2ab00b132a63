#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "efp/masking.hpp"
#include "efp/matrix.hpp"
#include "efp/verifier.hpp"

namespace efp {

/// Integer currency units; one unit plays the role of one ether in the demo.
using Units = std::uint64_t;
using TaskId = std::uint64_t;

struct AccountId {
  std::string value;

  AccountId() = default;
  AccountId(std::string v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  AccountId(const char* v) : value(v) {}             // NOLINT(google-explicit-constructor)

  friend auto operator<=>(const AccountId&, const AccountId&) = default;
};

/// Numeric codes are part of the snapshot format.
enum class TaskStatus : int { Open = 0, Claimed = 1, PaidToCloud = 2, Refunded = 3 };

[[nodiscard]] constexpr bool is_terminal(TaskStatus s) noexcept {
  return s == TaskStatus::PaidToCloud || s == TaskStatus::Refunded;
}

struct TaskRecord {
  TaskId task_id = 0;
  AccountId client;
  std::optional<AccountId> cloud;  ///< set iff status != Open
  Units service_fee = 0;
  Units deposit = 0;  ///< 0 while Open, fee * multiplier once claimed
  TaskStatus status = TaskStatus::Open;

  std::string problem_hash;
  std::shared_ptr<const MaskedProblem> problem;  ///< absent after a snapshot load

  std::optional<std::string> result_hash;  ///< set once a result was submitted
  std::shared_ptr<const Matrix> result;    ///< absent after a snapshot load or no-result
  std::optional<VerificationReport> report;
};

// Successful mutations are recorded as events. Replaying the events emitted
// after a snapshot onto that snapshot reproduces the ledger exactly.

struct AccountOpened {
  AccountId id;
  Units balance = 0;
};
struct TaskSubmitted {
  TaskId task_id = 0;
  AccountId client;
  Units fee = 0;
  std::string problem_hash;
};
struct TaskClaimed {
  TaskId task_id = 0;
  AccountId cloud;
  Units deposit = 0;
};
/// `result_hash` is the SHA-256 of the submitted matrix; `report` is empty
/// when the result had the wrong shape and could not be verified.
struct ResultSubmitted {
  TaskId task_id = 0;
  std::string result_hash;
  std::optional<VerificationReport> report;
  int flag = 0;
};
struct NoResultReported {
  TaskId task_id = 0;
};

using LedgerEvent =
    std::variant<AccountOpened, TaskSubmitted, TaskClaimed, ResultSubmitted, NoResultReported>;

struct ResultOutcome {
  int flag = 0;
  TaskStatus status = TaskStatus::Claimed;
  std::optional<VerificationReport> report;
};

struct LedgerTestPeer;

/// In-process escrow for outsourced tasks.
///
/// Every rejected call throws LedgerError (or ParameterError) and leaves the
/// state untouched. The sum of all balances plus escrow only changes when an
/// account is opened.
class Ledger {
 public:
  explicit Ledger(Units deposit_multiplier = 1);

  void open_account(const AccountId& id, Units initial_balance);

  TaskId submit_task(const AccountId& client, Units fee, std::shared_ptr<const MaskedProblem> mp);
  TaskId submit_task(const AccountId& client, Units fee, MaskedProblem mp);

  /// Escrows a deposit of fee * multiplier from `cloud`.
  void claim_task(const AccountId& cloud, TaskId task_id);

  /// Verifies r_prime against the task's public matrices and settles the
  /// escrow: pass pays the cloud, fail (including a wrong-shaped result)
  /// refunds the client with the cloud's deposit.
  ResultOutcome submit_result(const AccountId& submitter, TaskId task_id, Matrix r_prime,
                              std::size_t rounds = kDefaultRounds,
                              double tol = kDefaultTolerance, std::uint64_t seed = 0);

  /// The worker could not produce a result (e.g. a singular masked system).
  /// Settles as a failed verification.
  void report_no_result(TaskId task_id);

  /// Re-applies a recorded event, re-checking its preconditions.
  void apply(const LedgerEvent& event);

  [[nodiscard]] Units balance(const AccountId& id) const;
  [[nodiscard]] bool has_account(const AccountId& id) const { return balances_.contains(id); }
  [[nodiscard]] Units escrow() const noexcept { return escrow_; }
  [[nodiscard]] Units total_supply() const noexcept { return total_supply_; }
  [[nodiscard]] Units deposit_multiplier() const noexcept { return deposit_multiplier_; }
  [[nodiscard]] const TaskRecord& task(TaskId id) const;
  [[nodiscard]] const std::map<TaskId, TaskRecord>& tasks() const noexcept { return tasks_; }
  [[nodiscard]] const std::map<AccountId, Units>& balances() const noexcept { return balances_; }
  [[nodiscard]] const std::vector<LedgerEvent>& events() const noexcept { return events_; }

  /// Conservation and escrow accounting; throws LedgerError if broken.
  void check_invariants() const;

  /// {"deposit_multiplier", "next_task_id", "balances", "escrow", "tasks": [...]}
  [[nodiscard]] std::string snapshot_json() const;
  /// Loaded ledgers carry hashes only, no matrices, and an empty event log.
  static Ledger from_snapshot_json(const std::string& text);

 private:
  friend struct LedgerTestPeer;

  /// Settles a claimed task: flag 1 pays fee + deposit to the cloud and
  /// marks it PaidToCloud, flag 0 pays it to the client and marks it Refunded.
  void payment(TaskId task_id, int flag);

  TaskRecord& claimed_task(TaskId task_id, const char* op);
  void credit(const AccountId& id, Units amount);

  Units deposit_multiplier_;
  std::map<AccountId, Units> balances_;
  Units escrow_ = 0;
  Units total_supply_ = 0;
  std::map<TaskId, TaskRecord> tasks_;
  TaskId next_task_id_ = 0;
  std::vector<LedgerEvent> events_;
};

std::string events_to_json(const std::vector<LedgerEvent>& events);
std::vector<LedgerEvent> events_from_json(const std::string& text);

}  // namespace efp
