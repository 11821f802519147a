#pragma once

// Posted-price functions for the three shared resources (reserved capacity,
// charging power, discharging power) and the competitive-ratio bound they
// imply. Prices are pure functions of the aggregate usage, so nothing here
// holds state.

#include <span>
#include <vector>

#include "ces/model.hpp"

namespace ces {

// Lower/upper bounds on per-unit valuations. l_e/u_e are $ per kWh reserved
// per slot, l_c/u_c and l_d/u_d are $ per kW charged/discharged per slot.
struct ValuationBounds {
  double l_e = 1.0, u_e = 1.0;
  double l_c = 1.0, u_c = 1.0;
  double l_d = 1.0, u_d = 1.0;

  // Throws ConfigError unless 0 < L <= U for every pair and
  // u_c / l_c == u_d / l_d to 1e-9 relative.
  void validate() const;

  static ValuationBounds uniform(double lower, double upper) {
    return {lower, upper, lower, upper, lower, upper};
  }
};

// Aggregate reservations. energy[t] is kWh reserved, power[t] is net kW
// (positive = net charging).
struct UsageVector {
  std::vector<double> energy;
  std::vector<double> power;

  static UsageVector zeros(int slot_count) {
    const auto n = static_cast<std::size_t>(slot_count);
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
};

// (L_e/6) (6 U_e / L_e)^(y / E_cap) for y in [0, E_cap].
double price_energy(double energy_usage, const ValuationBounds& bounds,
                    const CesConfig& ces);
// (L_c/6) (6 U_c / L_c)^(y / P_c) for y in [-P_d, P_c].
double price_charge(double power_usage, const ValuationBounds& bounds,
                    const CesConfig& ces);
// (L_d/6) (6 U_d / L_d)^(-y / P_d) for y in [-P_d, P_c].
double price_discharge(double power_usage, const ValuationBounds& bounds,
                       const CesConfig& ces);

// Posted prices for one slot.
struct SlotPrices {
  double energy = 0.0;
  double charge = 0.0;
  double discharge = 0.0;
};

SlotPrices prices_at(const UsageVector& usage, int slot,
                     const ValuationBounds& bounds, const CesConfig& ces);

// Derives bounds from a request set. The lower bounds divide by three times
// the summed usage, the upper bounds take the largest per-slot ratio; the
// charge/discharge pair with the smaller U/L ratio gets its U raised so both
// ratios match. Options with zero valuation are ignored. Throws
// CannotEstimateError when nothing reserves capacity.
ValuationBounds estimate_bounds(std::span<const Request> requests,
                                const TimeGrid& grid);

struct CompetitiveRatio {
  double alpha_e = 0.0;   // 2 ln(6 U_e / L_e)
  double alpha_cd = 0.0;  // 2 ln(6 U_cd / L_cd)
  double alpha = 0.0;     // max of the two
};

CompetitiveRatio competitive_ratio(const ValuationBounds& bounds);

// Per-step constant of the incremental primal/dual inequality: half of the
// competitive ratio, max(ln(6 U_e / L_e), ln(6 U_cd / L_cd)).
double increment_alpha(const ValuationBounds& bounds);

// True when every per-unit valuation v / usage(t) of the option lies inside
// the bounds for each resource it touches.
bool option_within_bounds(const ScheduleOption& option,
                          const ValuationBounds& bounds);

}  // namespace ces
