#pragma once

// Online posted-price scheduler. Requests arrive one at a time; each is
// either granted one of its schedule options at the currently posted price
// or denied, irrevocably. Prices follow the aggregate usage through the
// exponential functions in pricing.hpp.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ces/model.hpp"
#include "ces/pricing.hpp"

namespace ces {

struct EngineConfig {
  TimeGrid grid;
  CesConfig ces;
  ValuationBounds bounds;
  // Reject options that would breach a battery limit regardless of price.
  // Only ever disabled for fault-injection runs.
  bool hard_guard = true;

  void validate() const;
};

struct Allocation {
  int option_index = 0;
  double payment = 0.0;  // signed: negative means net remuneration
};

struct EngineState {
  UsageVector usage;
  std::map<std::int64_t, Allocation> allocations;
  std::set<std::int64_t> denials;
  // u_n of every processed request, in processing order.
  std::vector<double> utilities;
  // P^0..P^n and D^0..D^n.
  std::vector<double> primal_ledger;
  std::vector<double> dual_ledger;

  bool processed(std::int64_t id) const {
    return allocations.contains(id) || denials.contains(id);
  }
};

enum class DenialReason { kNonPositiveUtility, kHardInfeasible, kEmptyOptionSet };

std::string_view to_string(DenialReason reason);

struct Accepted {
  int option_index = 0;
  double payment = 0.0;
  double utility = 0.0;
};

struct Denied {
  DenialReason reason = DenialReason::kNonPositiveUtility;
};

struct Decision {
  std::int64_t request_id = 0;
  double valuation = 0.0;  // of the chosen option; 0 when denied
  std::variant<Accepted, Denied> outcome;

  bool accepted() const { return std::holds_alternative<Accepted>(outcome); }
  const Accepted& accepted_outcome() const { return std::get<Accepted>(outcome); }
};

// Price of an option at the prices posted for the current usage:
// sum_t e(t) p_e(t) + i(t) p_c(t) - i(t) p_d(t).
double schedule_cost(const ScheduleOption& option, const EngineState& state,
                     const EngineConfig& config);

// Whether adding the option keeps every slot within the battery limits.
bool fits(const ScheduleOption& option, const UsageVector& usage,
          const CesConfig& ces);

struct UtilityResult {
  double utility = 0.0;
  std::optional<int> best_option;
  bool any_feasible = false;
};

// max(0, max_s v_s - cost_s) over the options that fit; ties go to the
// lowest index. best_option is set only when the maximum is strictly
// positive.
UtilityResult utility(const Request& request, const EngineState& state,
                      const EngineConfig& config);

// sum_n u_n + sum_t (E_cap p_e(t) + P_c p_c(t) + P_d p_d(t)).
double dual_objective(const EngineState& state, const EngineConfig& config);

EngineState initial_state(const EngineConfig& config);

// Decides one request and commits the result into state. On any error the
// state is left untouched. Throws ProtocolError on a repeated request id.
Decision process_request(const Request& request, EngineState& state,
                         const EngineConfig& config);

struct TraceStep {
  double primal = 0.0;
  double dual = 0.0;
  UsageVector usage;
};

struct RunResult {
  std::vector<Decision> decisions;
  EngineState final_state;
  double welfare = 0.0;
  // Entry 0 is the initial state, entry n the state after request n.
  std::vector<TraceStep> trace;
};

// Folds process_request over the sequence. arrival_index must be strictly
// increasing.
RunResult run_sequence(std::span<const Request> requests,
                       const EngineConfig& config);

}  // namespace ces
