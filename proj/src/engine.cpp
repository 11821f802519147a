#include "ces/engine.hpp"

#include <algorithm>
#include <string>

#include "ces/errors.hpp"

namespace ces {

void EngineConfig::validate() const {
  grid.validate();
  ces.validate();
  bounds.validate();
}

std::string_view to_string(DenialReason reason) {
  switch (reason) {
    case DenialReason::kNonPositiveUtility:
      return "zero-or-negative-utility";
    case DenialReason::kHardInfeasible:
      return "hard-infeasible";
    case DenialReason::kEmptyOptionSet:
      return "empty-option-set";
  }
  return "unknown";
}

double schedule_cost(const ScheduleOption& option, const EngineState& state,
                     const EngineConfig& config) {
  const int first = std::min(option.capacity.empty() ? option.charge.first_slot()
                                                     : option.capacity.first_slot(),
                             option.charge.empty() ? option.capacity.first_slot()
                                                   : option.charge.first_slot());
  const int end = std::max(option.capacity.end_slot(), option.charge.end_slot());
  double cost = 0.0;
  for (int t = first; t < end; ++t) {
    const double e = option.capacity.at(t);
    const double kw = option.charge.at(t);
    if (e == 0.0 && kw == 0.0) continue;
    const auto i = static_cast<std::size_t>(t);
    if (e != 0.0) cost += e * price_energy(state.usage.energy[i], config.bounds, config.ces);
    if (kw != 0.0) {
      const double y = state.usage.power[i];
      cost += kw * price_charge(y, config.bounds, config.ces) -
              kw * price_discharge(y, config.bounds, config.ces);
    }
  }
  return cost;
}

bool fits(const ScheduleOption& option, const UsageVector& usage,
          const CesConfig& ces) {
  for (int t = option.capacity.first_slot(); t < option.capacity.end_slot(); ++t) {
    const double y = usage.energy[static_cast<std::size_t>(t)] + option.capacity.at(t);
    if (y > ces.energy_cap || y < 0.0) return false;
  }
  for (int t = option.charge.first_slot(); t < option.charge.end_slot(); ++t) {
    const double y = usage.power[static_cast<std::size_t>(t)] + option.charge.at(t);
    if (y > ces.charge_cap || y < -ces.discharge_cap) return false;
  }
  return true;
}

UtilityResult utility(const Request& request, const EngineState& state,
                      const EngineConfig& config) {
  UtilityResult result;
  double best = 0.0;
  for (std::size_t s = 0; s < request.options.size(); ++s) {
    const ScheduleOption& option = request.options[s];
    if (config.hard_guard && !fits(option, state.usage, config.ces)) continue;
    result.any_feasible = true;
    const double u = option.valuation - schedule_cost(option, state, config);
    if (u > best) {
      best = u;
      result.best_option = static_cast<int>(s);
    }
  }
  result.utility = best;
  return result;
}

namespace {

// Adds the conjugate terms sum_t (E_cap p_e + P_c p_c + P_d p_d) onto d.
double add_price_terms(double d, const UsageVector& usage,
                       const EngineConfig& config) {
  for (int t = 0; t < config.grid.slot_count; ++t) {
    const SlotPrices p = prices_at(usage, t, config.bounds, config.ces);
    d += config.ces.energy_cap * p.energy + config.ces.charge_cap * p.charge +
         config.ces.discharge_cap * p.discharge;
  }
  return d;
}

}  // namespace

double dual_objective(const EngineState& state, const EngineConfig& config) {
  double d = 0.0;
  for (double u : state.utilities) d += u;
  return add_price_terms(d, state.usage, config);
}

EngineState initial_state(const EngineConfig& config) {
  EngineState state;
  state.usage = UsageVector::zeros(config.grid.slot_count);
  state.primal_ledger.push_back(0.0);
  state.dual_ledger.push_back(dual_objective(state, config));
  return state;
}

namespace {

void add_usage(const ScheduleOption& option, UsageVector& usage) {
  for (int t = option.capacity.first_slot(); t < option.capacity.end_slot(); ++t) {
    usage.energy[static_cast<std::size_t>(t)] += option.capacity.at(t);
  }
  for (int t = option.charge.first_slot(); t < option.charge.end_slot(); ++t) {
    usage.power[static_cast<std::size_t>(t)] += option.charge.at(t);
  }
}

}  // namespace

Decision process_request(const Request& request, EngineState& state,
                         const EngineConfig& config) {
  if (state.processed(request.id)) {
    throw ProtocolError("request " + std::to_string(request.id) +
                        " was already processed");
  }

  Decision decision;
  decision.request_id = request.id;
  const double prev_primal = state.primal_ledger.back();
  const double prev_dual = state.dual_ledger.back();

  if (request.options.empty()) {
    decision.outcome = Denied{DenialReason::kEmptyOptionSet};
  } else {
    const UtilityResult u = utility(request, state, config);
    if (u.best_option) {
      const ScheduleOption& chosen = request.options[static_cast<std::size_t>(*u.best_option)];
      const double payment = schedule_cost(chosen, state, config);

      // Evaluate the successor on the side so a throw leaves `state` intact.
      UsageVector next_usage = state.usage;
      add_usage(chosen, next_usage);
      double utility_sum = 0.0;
      for (double x : state.utilities) utility_sum += x;
      const double dual = add_price_terms(utility_sum + u.utility, next_usage, config);

      state.usage = std::move(next_usage);
      state.utilities.push_back(u.utility);
      state.allocations[request.id] = Allocation{*u.best_option, payment};
      state.primal_ledger.push_back(prev_primal + chosen.valuation);
      state.dual_ledger.push_back(dual);

      decision.valuation = chosen.valuation;
      decision.outcome = Accepted{*u.best_option, payment, u.utility};
      return decision;
    }
    decision.outcome = Denied{u.any_feasible ? DenialReason::kNonPositiveUtility
                                             : DenialReason::kHardInfeasible};
  }

  state.denials.insert(request.id);
  state.utilities.push_back(0.0);
  state.primal_ledger.push_back(prev_primal);
  state.dual_ledger.push_back(prev_dual);
  return decision;
}

RunResult run_sequence(std::span<const Request> requests,
                       const EngineConfig& config) {
  for (std::size_t i = 1; i < requests.size(); ++i) {
    if (requests[i].arrival_index <= requests[i - 1].arrival_index) {
      throw ProtocolError("arrival_index must be strictly increasing (request " +
                          std::to_string(requests[i].id) + ")");
    }
  }

  RunResult run;
  run.final_state = initial_state(config);
  run.trace.push_back({0.0, run.final_state.dual_ledger.back(), run.final_state.usage});
  run.decisions.reserve(requests.size());
  for (const Request& r : requests) {
    run.decisions.push_back(process_request(r, run.final_state, config));
    run.trace.push_back({run.final_state.primal_ledger.back(),
                         run.final_state.dual_ledger.back(), run.final_state.usage});
  }
  run.welfare = run.final_state.primal_ledger.back();
  return run;
}

}  // namespace ces
