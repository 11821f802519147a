#pragma once

// Exact offline reference: the welfare-maximizing integer allocation when the
// whole request sequence is known up front, a first-come-first-serve
// baseline, and the report comparing both against the online engine.

#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "ces/engine.hpp"
#include "ces/model.hpp"
#include "ces/pricing.hpp"

namespace ces {

struct OfflineSolution {
  std::map<std::int64_t, int> chosen;  // request id -> option index
  double welfare = 0.0;
  std::int64_t node_count = 0;
};

enum class OracleMethod { kExhaustive, kBranchAndBound };

// Size caps. Exhaustive search enumerates prod(|S_n| + 1) assignments;
// branch-and-bound is limited by the total option count.
inline constexpr double kExhaustiveCap = 1e7;
inline constexpr std::int64_t kBranchAndBoundCap = 1000;

// Globally optimal allocation. Among optimal allocations the one that is
// lexicographically first in request order is returned, where a lower option
// index precedes a higher one and denial comes last. Both methods therefore
// return the same allocation. Throws CapExceededError above the caps.
OfflineSolution solve_offline(std::span<const Request> requests,
                              const CesConfig& ces, const TimeGrid& grid,
                              OracleMethod method = OracleMethod::kBranchAndBound);

// Arrival-order baseline: every request gets its highest-valuation option
// that still fits, at zero price.
OfflineSolution solve_fcfs(std::span<const Request> requests,
                           const CesConfig& ces, const TimeGrid& grid);

// Recomputes aggregate usage of an allocation and checks every slot limit.
bool allocation_feasible(std::span<const Request> requests,
                         const std::map<std::int64_t, int>& chosen,
                         const CesConfig& ces, const TimeGrid& grid);

struct RatioReport {
  double opt_welfare = 0.0;
  double alg_welfare = 0.0;
  double fcfs_welfare = 0.0;
  // opt / alg. Infinite when alg is zero and opt positive; 1 when both are 0.
  double empirical_ratio = 1.0;
  double theoretical_alpha = 0.0;
  // D^0 / OPT; infinite when OPT is 0.
  double d0_over_opt = 0.0;
  bool ratio_infinite = false;
  bool exceeds_alpha = false;
};

struct ComparisonRun {
  RunResult online;
  OfflineSolution offline;
  OfflineSolution fcfs;
  RatioReport report;
};

ComparisonRun compare(std::span<const Request> requests,
                      const EngineConfig& config,
                      OracleMethod method = OracleMethod::kBranchAndBound);

RatioReport build_ratio_report(std::span<const Request> requests,
                               const ValuationBounds& bounds,
                               const CesConfig& ces, const TimeGrid& grid);

}  // namespace ces
