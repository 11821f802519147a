#include "ces/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ces/errors.hpp"

namespace ces {

namespace {

constexpr double kRatioRelTol = 1e-9;

double exp_price(double lower, double upper, double fraction) {
  return (lower / 6.0) * std::pow(6.0 * upper / lower, fraction);
}

void check_pair(double lower, double upper, const char* name) {
  if (!(lower > 0.0) || !(upper >= lower) || !std::isfinite(upper)) {
    throw ConfigError(std::string("invalid valuation bounds for ") + name +
                      ": need 0 < L <= U");
  }
}

void check_power_domain(double y, const CesConfig& ces) {
  if (!(y >= -ces.discharge_cap && y <= ces.charge_cap)) {
    throw DomainError("net power usage " + std::to_string(y) +
                      " outside [-P_d, P_c]");
  }
}

}  // namespace

void ValuationBounds::validate() const {
  check_pair(l_e, u_e, "energy");
  check_pair(l_c, u_c, "charging");
  check_pair(l_d, u_d, "discharging");
  const double rc = u_c / l_c;
  const double rd = u_d / l_d;
  if (std::abs(rc - rd) > kRatioRelTol * std::max(rc, rd)) {
    throw ConfigError("charging and discharging U/L ratios differ");
  }
}

double price_energy(double energy_usage, const ValuationBounds& bounds,
                    const CesConfig& ces) {
  if (!(energy_usage >= 0.0 && energy_usage <= ces.energy_cap)) {
    throw DomainError("energy usage " + std::to_string(energy_usage) +
                      " outside [0, E_cap]");
  }
  return exp_price(bounds.l_e, bounds.u_e, energy_usage / ces.energy_cap);
}

double price_charge(double power_usage, const ValuationBounds& bounds,
                    const CesConfig& ces) {
  check_power_domain(power_usage, ces);
  return exp_price(bounds.l_c, bounds.u_c, power_usage / ces.charge_cap);
}

double price_discharge(double power_usage, const ValuationBounds& bounds,
                       const CesConfig& ces) {
  check_power_domain(power_usage, ces);
  return exp_price(bounds.l_d, bounds.u_d, -power_usage / ces.discharge_cap);
}

SlotPrices prices_at(const UsageVector& usage, int slot,
                     const ValuationBounds& bounds, const CesConfig& ces) {
  const auto t = static_cast<std::size_t>(slot);
  return {price_energy(usage.energy[t], bounds, ces),
          price_charge(usage.power[t], bounds, ces),
          price_discharge(usage.power[t], bounds, ces)};
}

ValuationBounds estimate_bounds(std::span<const Request> requests,
                                const TimeGrid& grid) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  struct Pair {
    double lower = kInf;
    double upper = 0.0;
    void add(double v, double total, double peak_ratio) {
      lower = std::min(lower, v / (3.0 * total));
      upper = std::max(upper, peak_ratio);
    }
    bool valid() const { return lower < kInf && upper > 0.0; }
  };
  Pair energy, charge, discharge;

  for (const Request& r : requests) {
    for (const ScheduleOption& o : r.options) {
      const double v = o.valuation;
      if (!(v > 0.0)) continue;

      double e_sum = 0.0, e_ratio = 0.0;
      for (int t = o.capacity.first_slot(); t < o.capacity.end_slot(); ++t) {
        const double e = o.capacity.at(t);
        if (e > 0.0) {
          e_sum += e;
          e_ratio = std::max(e_ratio, v / e);
        }
      }
      if (e_sum > 0.0) energy.add(v, e_sum, e_ratio);

      double c_sum = 0.0, c_ratio = 0.0, d_sum = 0.0, d_ratio = 0.0;
      for (int t = o.charge.first_slot(); t < o.charge.end_slot(); ++t) {
        const double kw = o.charge.at(t);
        if (kw > 0.0) {
          c_sum += kw;
          c_ratio = std::max(c_ratio, v / kw);
        } else if (kw < 0.0) {
          d_sum -= kw;
          d_ratio = std::max(d_ratio, -v / kw);
        }
      }
      if (c_sum > 0.0) charge.add(v, c_sum, c_ratio);
      if (d_sum > 0.0) discharge.add(v, d_sum, d_ratio);
    }
  }
  (void)grid;

  if (!energy.valid()) {
    throw CannotEstimateError(
        "no option with positive valuation reserves any capacity");
  }
  // Capacity implies charging, but a set of never-discharging options has no
  // discharge data; mirror the charging pair in that case.
  if (!discharge.valid()) discharge = charge;

  ValuationBounds b{energy.lower, energy.upper, charge.lower,
                    charge.upper, discharge.lower, discharge.upper};
  const double rc = b.u_c / b.l_c;
  const double rd = b.u_d / b.l_d;
  if (rc < rd) {
    b.u_c = b.l_c * rd;
  } else if (rd < rc) {
    b.u_d = b.l_d * rc;
  }
  return b;
}

CompetitiveRatio competitive_ratio(const ValuationBounds& bounds) {
  CompetitiveRatio r;
  r.alpha_e = 2.0 * std::log(6.0 * bounds.u_e / bounds.l_e);
  const double cd = std::max(bounds.u_c / bounds.l_c, bounds.u_d / bounds.l_d);
  r.alpha_cd = 2.0 * std::log(6.0 * cd);
  r.alpha = std::max(r.alpha_e, r.alpha_cd);
  return r;
}

double increment_alpha(const ValuationBounds& bounds) {
  return competitive_ratio(bounds).alpha / 2.0;
}

bool option_within_bounds(const ScheduleOption& option,
                          const ValuationBounds& bounds) {
  const double v = option.valuation;
  auto inside = [v](double usage, double lower, double upper) {
    const double per_unit = v / usage;
    return per_unit >= lower && per_unit <= upper;
  };
  for (int t = option.capacity.first_slot(); t < option.capacity.end_slot(); ++t) {
    const double e = option.capacity.at(t);
    if (e > 0.0 && !inside(e, bounds.l_e, bounds.u_e)) return false;
  }
  for (int t = option.charge.first_slot(); t < option.charge.end_slot(); ++t) {
    const double kw = option.charge.at(t);
    if (kw > 0.0 && !inside(kw, bounds.l_c, bounds.u_c)) return false;
    if (kw < 0.0 && !inside(-kw, bounds.l_d, bounds.u_d)) return false;
  }
  return true;
}

}  // namespace ces
