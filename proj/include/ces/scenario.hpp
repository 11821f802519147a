#pragma once

// Request-sequence generators: the ten-user shared-schedule example, its
// adversarial worst case, seeded random small-bid instances, large-bid
// stress instances, and case-study requests built from net-load and tariff
// CSV data.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ces/engine.hpp"
#include "ces/model.hpp"
#include "ces/pricing.hpp"

namespace ces {

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
};

struct Scenario {
  TimeGrid grid;
  CesConfig ces;
  ValuationBounds bounds;
  std::optional<TariffProfile> tariff;
  std::vector<Request> requests;
  Provenance provenance;

  EngineConfig engine_config() const { return {grid, ces, bounds, true}; }
};

// Number of options whose per-unit valuations fall outside the declared
// bounds.
std::size_t count_out_of_bounds(const Scenario& scenario);

// Throws InputError if arrival indices are not strictly increasing, ids
// repeat, or any option sits outside the grid.
void validate_scenario(const Scenario& scenario);

// Ten single-option users sharing the profile charge 1 kW, hold 1 kWh, then
// discharge 1 kW, on a four-slot hourly grid with a 5 kWh / 5 kW / 5 kW
// battery and bounds [1, 10] on every resource. Valuations must be ten
// values in [1, 10].
Scenario gen_intuitive(std::span<const double> valuations);

// The ten-user skeleton where users 1-5 bid exactly epsilon above the price
// the engine posts for them and users 6-10 bid 10. Valuations are found by
// replaying the engine while building the sequence.
Scenario gen_worst_case(double epsilon = 1e-6);

// Seeded instance where every option charges and later discharges at most
// small_bid_fraction of each battery limit per slot, with valuations drawn
// inside the declared bounds. small_bid_fraction must be in (0, 0.05].
Scenario gen_random(std::uint64_t seed, int n_requests, int opts_per_request,
                    double small_bid_fraction);

// Stress instance with bids up to the full battery limits. valuation_scale
// multiplies the upper end of the valuation range, so values above 1 produce
// bids the declared bounds do not cover.
Scenario gen_large_bid(std::uint64_t seed, int n_requests, int opts_per_request,
                       double valuation_scale = 1.0);

struct NetLoadTable {
  std::vector<std::string> buildings;
  // kw[b][t]; negative values are surplus generation.
  std::vector<std::vector<double>> kw;
  int slot_count() const { return kw.empty() ? 0 : static_cast<int>(kw.front().size()); }
};

// Header row "slot,<building>,..." then one row per slot, slots 0..T-1 in
// order.
NetLoadTable parse_netload_csv(const std::string& text);
// Header row "slot,price_per_kwh" then one row per slot.
TariffProfile parse_tariff_csv(const std::string& text);

struct CaseStudyParams {
  CesConfig ces{2500.0, 500.0, 500.0};
  int horizon_slots = 0;  // 0 = every slot in the CSVs
  int discharge_window = 96;
  double slot_hours = 1.0;
};

// One request per (slot, building) with surplus. Option k = 1..window
// charges the surplus at slot t and discharges the same power at slot t + k,
// valued at the grid cost it displaces. Requests arrive by slot, then by
// building column. Bounds are estimated from the generated requests.
Scenario gen_case_study(const NetLoadTable& netload, const TariffProfile& tariff,
                        const CaseStudyParams& params);

}  // namespace ces
