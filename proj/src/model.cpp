#include "ces/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "ces/errors.hpp"

namespace ces {

namespace {

// Relative slack used when deciding that cumulative stored energy is zero
// rather than slightly negative from rounding.
constexpr double kEnergyRelTol = 1e-9;

void check_in_grid(const ChargeProfile& charge, const TimeGrid& grid) {
  if (charge.empty()) return;
  if (charge.first_slot() < 0 || charge.end_slot() > grid.slot_count) {
    throw DimensionError("charge profile covers slots [" +
                         std::to_string(charge.first_slot()) + ", " +
                         std::to_string(charge.end_slot()) +
                         ") outside a grid of " +
                         std::to_string(grid.slot_count) + " slots");
  }
}

void check_tariff(const TariffProfile& tariff, const TimeGrid& grid) {
  if (static_cast<int>(tariff.price_per_kwh.size()) != grid.slot_count) {
    throw DimensionError("tariff has " +
                         std::to_string(tariff.price_per_kwh.size()) +
                         " entries, grid has " +
                         std::to_string(grid.slot_count) + " slots");
  }
}

}  // namespace

void TimeGrid::validate() const {
  if (slot_count < 1) throw ConfigError("slot_count must be >= 1");
  if (!(slot_hours > 0.0) || !std::isfinite(slot_hours)) {
    throw ConfigError("slot_hours must be positive");
  }
}

void CesConfig::validate() const {
  for (double v : {energy_cap, charge_cap, discharge_cap}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("battery limits must be strictly positive");
    }
  }
}

void TariffProfile::validate(const TimeGrid& grid) const {
  check_tariff(*this, grid);
  for (double p : price_per_kwh) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InputError("tariff prices must be finite and nonnegative");
    }
  }
}

CapacityProfile derive_capacity_profile(const ChargeProfile& charge,
                                        const TimeGrid& grid) {
  check_in_grid(charge, grid);
  if (charge.empty()) return {};

  double throughput = 0.0;
  for (double kw : charge.values()) throughput += std::abs(kw) * grid.slot_hours;
  const double tol = kEnergyRelTol * throughput;

  std::vector<double> reserved;
  reserved.reserve(charge.values().size());
  double stored = 0.0;
  for (int t = charge.first_slot(); t < charge.end_slot(); ++t) {
    const double kw = charge.at(t);
    if (!std::isfinite(kw)) throw MalformedProfileError("non-finite power");
    const double before = stored;
    stored += kw * grid.slot_hours;
    if (stored < -tol) {
      throw MalformedProfileError("cumulative energy negative at slot " +
                                  std::to_string(t) +
                                  ": discharges energy never stored");
    }
    if (std::abs(stored) <= tol) stored = 0.0;
    reserved.push_back(std::max(before, stored));
  }
  // Residual energy stays in the battery until the horizon ends.
  if (stored > 0.0) {
    reserved.resize(reserved.size() +
                        static_cast<std::size_t>(grid.slot_count - charge.end_slot()),
                    stored);
  }
  return CapacityProfile(charge.first_slot(), std::move(reserved));
}

double net_energy(const ChargeProfile& charge, const TimeGrid& grid) {
  double e = 0.0;
  for (double kw : charge.values()) e += kw * grid.slot_hours;
  return e;
}

double valuation_solar(const ChargeProfile& charge, const TariffProfile& tariff,
                       const TimeGrid& grid) {
  check_tariff(tariff, grid);
  check_in_grid(charge, grid);
  double v = 0.0;
  for (int t = charge.first_slot(); t < charge.end_slot(); ++t) {
    const double kw = charge.at(t);
    if (kw < 0.0) v -= tariff.price_per_kwh[static_cast<std::size_t>(t)] * kw * grid.slot_hours;
  }
  return v;
}

double valuation_arbitrage(const ChargeProfile& charge,
                           const TariffProfile& tariff, const TimeGrid& grid) {
  double cost = 0.0;
  check_tariff(tariff, grid);
  check_in_grid(charge, grid);
  for (int t = charge.first_slot(); t < charge.end_slot(); ++t) {
    const double kw = charge.at(t);
    if (kw > 0.0) cost += tariff.price_per_kwh[static_cast<std::size_t>(t)] * kw * grid.slot_hours;
  }
  return valuation_solar(charge, tariff, grid) - cost;
}

ScheduleOption make_option(const TimeGrid& grid, int start_slot, int end_slot,
                           ChargeProfile charge, double valuation) {
  if (!grid.contains(start_slot) || !grid.contains(end_slot) ||
      start_slot > end_slot) {
    throw DimensionError("option window [" + std::to_string(start_slot) + ", " +
                         std::to_string(end_slot) + "] invalid for a grid of " +
                         std::to_string(grid.slot_count) + " slots");
  }
  if (!charge.empty() &&
      (charge.first_slot() < start_slot || charge.end_slot() > end_slot + 1)) {
    // Trailing zeros outside the window are harmless; anything else is not.
    for (int t = charge.first_slot(); t < charge.end_slot(); ++t) {
      if ((t < start_slot || t > end_slot) && charge.at(t) != 0.0) {
        throw DimensionError("charge profile nonzero outside option window at slot " +
                             std::to_string(t));
      }
    }
  }
  if (!(valuation >= 0.0) || !std::isfinite(valuation)) {
    throw InputError("option valuation must be finite and nonnegative");
  }
  ScheduleOption opt;
  opt.start_slot = start_slot;
  opt.end_slot = end_slot;
  opt.capacity = derive_capacity_profile(charge, grid);
  opt.charge = std::move(charge);
  opt.valuation = valuation;
  return opt;
}

void validate_requests(std::span<const Request> requests, const TimeGrid& grid) {
  std::unordered_set<std::int64_t> ids;
  for (const Request& r : requests) {
    if (!ids.insert(r.id).second) {
      throw InputError("duplicate request id " + std::to_string(r.id));
    }
    for (const ScheduleOption& o : r.options) {
      if (!grid.contains(o.start_slot) || !grid.contains(o.end_slot) ||
          o.start_slot > o.end_slot) {
        throw DimensionError("request " + std::to_string(r.id) +
                             " has an option outside the grid");
      }
    }
  }
}

}  // namespace ces
