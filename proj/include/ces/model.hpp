#pragma once

// Core domain types for shared battery scheduling: the time grid, battery
// limits, per-slot power and capacity profiles, schedule options and
// requests.
//
// Units are fixed throughout the library: power in kW, energy in kWh, money
// in dollars, slot duration in hours.

#include <cstdint>
#include <span>
#include <vector>

namespace ces {

struct TimeGrid {
  int slot_count = 1;
  double slot_hours = 1.0;

  // Throws ConfigError unless slot_count >= 1 and slot_hours > 0.
  void validate() const;
  bool contains(int slot) const { return slot >= 0 && slot < slot_count; }
};

struct CesConfig {
  double energy_cap = 0.0;     // kWh
  double charge_cap = 0.0;     // kW
  double discharge_cap = 0.0;  // kW

  void validate() const;
};

// Per-slot values stored over a contiguous window [first_slot, end_slot).
// Reads outside the window are zero, so a profile is implicitly defined on
// every slot of the grid. Tag distinguishes kW profiles from kWh profiles.
template <typename Tag>
class SlotSeries {
 public:
  SlotSeries() = default;
  SlotSeries(int first_slot, std::vector<double> values)
      : first_(first_slot), values_(std::move(values)) {}

  static SlotSeries dense(std::vector<double> values) {
    return SlotSeries(0, std::move(values));
  }

  int first_slot() const { return first_; }
  int end_slot() const { return first_ + static_cast<int>(values_.size()); }
  bool empty() const { return values_.empty(); }
  std::span<const double> values() const { return values_; }

  double at(int slot) const {
    const int i = slot - first_;
    if (i < 0 || i >= static_cast<int>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(i)];
  }

 private:
  int first_ = 0;
  std::vector<double> values_;
};

struct ChargeTag {};
struct CapacityTag {};

// Signed kW. Positive charges the battery, negative discharges it.
using ChargeProfile = SlotSeries<ChargeTag>;
// Nonnegative kWh of battery capacity reserved in each slot.
using CapacityProfile = SlotSeries<CapacityTag>;

struct TariffProfile {
  std::vector<double> price_per_kwh;  // $/kWh, one entry per slot

  void validate(const TimeGrid& grid) const;
};

// Reserved capacity implied by a charge profile. Within each slot the
// reservation is the larger of the stored energy at the start and at the
// end of the slot, so energy stays reserved through the slot it is
// discharged in. [+5, 0, -5, 0] with one-hour slots gives [5, 5, 5, 0].
//
// Energy left in the battery after the last nonzero slot stays reserved to
// the end of the horizon. Throws MalformedProfileError when cumulative
// energy goes negative and DimensionError when the profile leaves the grid.
CapacityProfile derive_capacity_profile(const ChargeProfile& charge,
                                        const TimeGrid& grid);

// Net energy pushed into the battery, sum of charge(t) * slot_hours.
double net_energy(const ChargeProfile& charge, const TimeGrid& grid);

// Grid cost displaced by the discharged energy. Always >= 0.
double valuation_solar(const ChargeProfile& charge, const TariffProfile& tariff,
                       const TimeGrid& grid);

// Displaced grid cost minus the grid cost of the charged energy. May be
// negative.
double valuation_arbitrage(const ChargeProfile& charge,
                           const TariffProfile& tariff, const TimeGrid& grid);

struct ScheduleOption {
  int start_slot = 0;
  int end_slot = 0;
  ChargeProfile charge;
  CapacityProfile capacity;
  double valuation = 0.0;
};

// Validates the slot window and valuation, then derives the capacity
// profile. Unbalanced profiles (net energy != 0) are accepted.
ScheduleOption make_option(const TimeGrid& grid, int start_slot, int end_slot,
                           ChargeProfile charge, double valuation);

struct Request {
  std::int64_t id = 0;
  std::int64_t arrival_index = 0;
  std::vector<ScheduleOption> options;
};

// Checks request-level invariants: option windows inside the grid and
// unique ids across the sequence.
void validate_requests(std::span<const Request> requests, const TimeGrid& grid);

}  // namespace ces
