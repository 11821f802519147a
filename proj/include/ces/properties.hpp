#pragma once

// Run-level invariant checks shared by the fuzz driver, the tests and the
// acceptance suite. Each check returns a named pass/fail with a human
// readable context string describing the first violation.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ces/engine.hpp"
#include "ces/oracle.hpp"
#include "ces/scenario.hpp"

namespace ces {

struct PropertyResult {
  std::string name;
  bool passed = true;
  bool skipped = false;  // not applicable to this run
  std::string detail;    // empty when passed
};

// Check names in the order check_instance reports them.
inline constexpr const char* kPropertyNames[] = {
    "safety",  "individual_rationality", "ledger", "increments",
    "weak_duality", "ratio", "oracle"};

// 0 <= y_e <= E_cap and -P_d <= y_c <= P_c on every slot of every trace
// step. Zero tolerance.
PropertyResult check_safety(const RunResult& run, const CesConfig& ces);

// valuation - payment > 0 for every accepted request, and the recorded
// utility equals valuation - payment to 1e-9.
PropertyResult check_individual_rationality(const RunResult& run);

// P^n is the running sum of accepted valuations and D^n matches the dual
// objective recomputed from the step's usage snapshot, both to 1e-9 relative.
PropertyResult check_ledger(const RunResult& run, const EngineConfig& config);

// P^n - P^{n-1} >= (D^n - D^{n-1}) / alpha' - slack * |D^n - D^{n-1}| on
// every step.
PropertyResult check_increments(const RunResult& run, const ValuationBounds& bounds,
                                double slack = 0.02);

// D^N >= OPT - tolerance.
PropertyResult check_weak_duality(const RunResult& run, double opt_welfare,
                                  double tolerance = 1e-6);

// 1 - 1e-9 <= OPT/ALG <= alpha.
PropertyResult check_ratio(const RatioReport& report);

// Offline and FCFS allocations are feasible and FCFS <= OPT.
PropertyResult check_oracle(std::span<const Request> requests, const ComparisonRun& cmp,
                            const CesConfig& ces, const TimeGrid& grid);

struct CaseStudyCheck {
  double charged_kwh = 0.0;     // accepted options, positive kW times slot hours
  double discharged_kwh = 0.0;  // accepted options, negative kW times slot hours
  double max_valuation_error = 0.0;
  std::size_t accepted = 0;
  PropertyResult balance;
  PropertyResult valuation;
};

// Energy balance over accepted allocations (1e-9 kWh) and every accepted
// valuation recomputed as the displaced grid cost against the scenario tariff
// (1e-9 relative). Requires scenario.tariff.
CaseStudyCheck check_case_study(const Scenario& scenario, const RunResult& run);

struct CheckOptions {
  bool hard_guard = true;
  // Oracle-backed checks (weak duality, ratio, oracle feasibility).
  bool with_oracle = true;
  // The ratio and increment checks only hold for bound-respecting small bids.
  bool theorem_checks = true;
  OracleMethod method = OracleMethod::kBranchAndBound;
};

struct InstanceCheck {
  std::vector<PropertyResult> results;
  std::optional<RatioReport> report;

  bool passed() const;
  const PropertyResult* first_failure() const;
};

// Runs the engine (and the oracle when requested) on the scenario and applies
// every check; inapplicable ones are marked skipped. An engine that throws
// while committing a decision is reported as a safety failure: it attempted
// to move usage outside the battery limits.
InstanceCheck check_instance(const Scenario& scenario, const CheckOptions& options);

}  // namespace ces
