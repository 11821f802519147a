#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "ces/errors.hpp"
#include "ces/scenario.hpp"

namespace ces {

namespace {

// mt19937_64 output mapped to doubles by hand so generated scenarios are the
// same on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Inclusive range.
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr int kIntuitiveUsers = 10;

Scenario intuitive_skeleton() {
  Scenario s;
  s.grid = {4, 1.0};
  s.ces = {5.0, 5.0, 5.0};
  s.bounds = ValuationBounds::uniform(1.0, 10.0);
  return s;
}

Request intuitive_request(const TimeGrid& grid, int user, double valuation) {
  Request r;
  r.id = user;
  r.arrival_index = user;
  r.options.push_back(
      make_option(grid, 0, 3, ChargeProfile::dense({1.0, 0.0, -1.0, 0.0}), valuation));
  return r;
}

// Valuation interval [max L * usage, min U * usage] over every resource slot
// the option touches, i.e. the values whose per-unit ratios all stay inside
// the bounds.
std::pair<double, double> admissible_valuations(const ScheduleOption& o,
                                                const ValuationBounds& b) {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int t = o.capacity.first_slot(); t < o.capacity.end_slot(); ++t) {
    const double e = o.capacity.at(t);
    if (e > 0.0) {
      lo = std::max(lo, b.l_e * e);
      hi = std::min(hi, b.u_e * e);
    }
  }
  for (int t = o.charge.first_slot(); t < o.charge.end_slot(); ++t) {
    const double kw = o.charge.at(t);
    if (kw > 0.0) {
      lo = std::max(lo, b.l_c * kw);
      hi = std::min(hi, b.u_c * kw);
    } else if (kw < 0.0) {
      lo = std::max(lo, b.l_d * -kw);
      hi = std::min(hi, b.u_d * -kw);
    }
  }
  return {lo, hi};
}

// A balanced charge-then-discharge profile starting at `start`: charge for
// 1-2 slots, optionally hold, then discharge for 1-2 slots. The larger of the
// two power levels is `peak` kW and stored energy never exceeds max_energy.
ChargeProfile random_profile(Rng& rng, const TimeGrid& grid, int start,
                             double peak, double max_energy, int& end_slot) {
  const int room = grid.slot_count - start;  // slots available, >= 2
  const int charge_len = std::min(rng.integer(1, 2), room - 1);
  const int discharge_len = std::min(rng.integer(1, 2), room - charge_len);
  const int max_gap = room - charge_len - discharge_len;
  const int gap = rng.integer(0, max_gap);

  double charge_kw = peak;
  double discharge_kw = peak;
  if (charge_len > discharge_len) {
    discharge_kw = peak;
    charge_kw = peak * discharge_len / charge_len;
  } else if (discharge_len > charge_len) {
    charge_kw = peak;
    discharge_kw = peak * charge_len / discharge_len;
  }
  const double stored = charge_kw * charge_len * grid.slot_hours;
  if (stored > max_energy) {
    const double scale = max_energy / stored;
    charge_kw *= scale;
    discharge_kw *= scale;
  }

  std::vector<double> kw;
  kw.insert(kw.end(), static_cast<std::size_t>(charge_len), charge_kw);
  kw.insert(kw.end(), static_cast<std::size_t>(gap), 0.0);
  kw.insert(kw.end(), static_cast<std::size_t>(discharge_len), -discharge_kw);
  end_slot = start + static_cast<int>(kw.size()) - 1;
  return ChargeProfile(start, std::move(kw));
}

Scenario random_instance(Rng& rng, int n_requests, int opts_per_request,
                         const TimeGrid& grid, const CesConfig& ces,
                         const ValuationBounds& bounds, double min_fraction,
                         double max_fraction, double valuation_scale) {
  Scenario s;
  s.grid = grid;
  s.ces = ces;
  s.bounds = bounds;
  const double power_limit = std::min(ces.charge_cap, ces.discharge_cap);
  for (int n = 0; n < n_requests; ++n) {
    Request r;
    r.id = n + 1;
    r.arrival_index = n + 1;
    const int start = rng.integer(0, grid.slot_count - 2);
    for (int k = 0; k < opts_per_request; ++k) {
      const double fraction = rng.uniform(min_fraction, max_fraction);
      const double peak = fraction * power_limit;
      int end = start;
      ChargeProfile profile =
          random_profile(rng, grid, start, peak, max_fraction * ces.energy_cap, end);
      ScheduleOption opt = make_option(grid, start, end, std::move(profile), 0.0);
      auto [lo, hi] = admissible_valuations(opt, bounds);
      if (!(hi >= lo)) {
        throw InputError("generated option has no admissible valuation");
      }
      opt.valuation = rng.uniform(lo, lo + (hi - lo) * valuation_scale);
      r.options.push_back(std::move(opt));
    }
    s.requests.push_back(std::move(r));
  }
  return s;
}

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_number(const std::string& cell, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
    throw InputError("row " + std::to_string(row) + ": not a number: '" + cell + "'");
  }
  return v;
}

void check_slot_column(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty() || rows.front().empty() || rows.front().front() != "slot") {
    throw InputError("CSV header must start with 'slot'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw InputError("row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " columns, header has " +
                       std::to_string(rows.front().size()));
    }
    if (parse_number(rows[i][0], i) != static_cast<double>(i - 1)) {
      throw InputError("row " + std::to_string(i) + ": slots must run 0, 1, 2, ...");
    }
  }
}

}  // namespace

std::size_t count_out_of_bounds(const Scenario& scenario) {
  std::size_t n = 0;
  for (const Request& r : scenario.requests) {
    for (const ScheduleOption& o : r.options) {
      if (!option_within_bounds(o, scenario.bounds)) ++n;
    }
  }
  return n;
}

void validate_scenario(const Scenario& scenario) {
  try {
    scenario.grid.validate();
    scenario.ces.validate();
    scenario.bounds.validate();
    validate_requests(scenario.requests, scenario.grid);
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  for (std::size_t i = 1; i < scenario.requests.size(); ++i) {
    if (scenario.requests[i].arrival_index <= scenario.requests[i - 1].arrival_index) {
      throw InputError("arrival_index must be strictly increasing");
    }
  }
  if (scenario.tariff) scenario.tariff->validate(scenario.grid);
}

Scenario gen_intuitive(std::span<const double> valuations) {
  if (valuations.size() != kIntuitiveUsers) {
    throw InputError("the shared-schedule example needs exactly 10 valuations");
  }
  Scenario s = intuitive_skeleton();
  for (int n = 0; n < kIntuitiveUsers; ++n) {
    const double v = valuations[static_cast<std::size_t>(n)];
    if (!(v >= 1.0 && v <= 10.0)) {
      throw InputError("valuations must lie in [1, 10]");
    }
    s.requests.push_back(intuitive_request(s.grid, n + 1, v));
  }
  s.provenance = {"intuitive", 0};
  if (count_out_of_bounds(s) != 0) {
    throw InputError("intuitive scenario violates its declared bounds");
  }
  return s;
}

Scenario gen_worst_case(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be positive");
  }
  Scenario s = intuitive_skeleton();
  const EngineConfig config = s.engine_config();
  EngineState state = initial_state(config);
  for (int n = 0; n < kIntuitiveUsers; ++n) {
    Request r = intuitive_request(s.grid, n + 1, 10.0);
    if (n < kIntuitiveUsers / 2) {
      r.options.front().valuation = schedule_cost(r.options.front(), state, config) + epsilon;
    }
    process_request(r, state, config);
    s.requests.push_back(std::move(r));
  }
  s.provenance = {"worstcase", 0};
  return s;
}

Scenario gen_random(std::uint64_t seed, int n_requests, int opts_per_request,
                    double small_bid_fraction) {
  if (n_requests < 0 || opts_per_request < 1) {
    throw InputError("need n_requests >= 0 and opts_per_request >= 1");
  }
  if (!(small_bid_fraction > 0.0 && small_bid_fraction <= 0.05)) {
    throw InputError("small_bid_fraction must be in (0, 0.05]");
  }
  Rng rng(seed);
  Scenario s = random_instance(rng, n_requests, opts_per_request, TimeGrid{8, 1.0},
                               CesConfig{100.0, 100.0, 100.0},
                               ValuationBounds::uniform(1.0, 10.0),
                               0.2 * small_bid_fraction, small_bid_fraction, 1.0);
  s.provenance = {"random", seed};
  if (count_out_of_bounds(s) != 0) {
    throw InputError("random scenario violates its declared bounds");
  }
  return s;
}

Scenario gen_large_bid(std::uint64_t seed, int n_requests, int opts_per_request,
                       double valuation_scale) {
  if (n_requests < 0 || opts_per_request < 1) {
    throw InputError("need n_requests >= 0 and opts_per_request >= 1");
  }
  if (!(valuation_scale >= 1.0) || !std::isfinite(valuation_scale)) {
    throw InputError("valuation_scale must be >= 1");
  }
  Rng rng(seed);
  Scenario s = random_instance(rng, n_requests, opts_per_request, TimeGrid{6, 1.0},
                               CesConfig{10.0, 10.0, 10.0},
                               ValuationBounds::uniform(1.0, 10.0), 0.1, 1.0,
                               valuation_scale);
  s.provenance = {"large-bid", seed};
  return s;
}

NetLoadTable parse_netload_csv(const std::string& text) {
  const auto rows = parse_rows(text);
  check_slot_column(rows);
  if (rows.front().size() < 2) throw InputError("net-load CSV has no building columns");
  NetLoadTable table;
  table.buildings.assign(rows.front().begin() + 1, rows.front().end());
  table.kw.assign(table.buildings.size(), {});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t b = 0; b < table.buildings.size(); ++b) {
      table.kw[b].push_back(parse_number(rows[i][b + 1], i));
    }
  }
  return table;
}

TariffProfile parse_tariff_csv(const std::string& text) {
  const auto rows = parse_rows(text);
  check_slot_column(rows);
  if (rows.front().size() != 2) {
    throw InputError("tariff CSV must have columns slot,price_per_kwh");
  }
  TariffProfile tariff;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = parse_number(rows[i][1], i);
    if (p < 0.0) throw InputError("row " + std::to_string(i) + ": negative tariff");
    tariff.price_per_kwh.push_back(p);
  }
  return tariff;
}

Scenario gen_case_study(const NetLoadTable& netload, const TariffProfile& tariff,
                        const CaseStudyParams& params) {
  const int horizon = params.horizon_slots > 0 ? params.horizon_slots : netload.slot_count();
  if (horizon < 1 || netload.slot_count() < horizon ||
      static_cast<int>(tariff.price_per_kwh.size()) < horizon) {
    throw InputError("net-load and tariff data must cover the horizon");
  }
  if (params.discharge_window < 1) throw InputError("discharge_window must be >= 1");

  Scenario s;
  s.grid = {horizon, params.slot_hours};
  s.grid.validate();
  s.ces = params.ces;
  s.tariff = TariffProfile{{tariff.price_per_kwh.begin(),
                            tariff.price_per_kwh.begin() + horizon}};
  s.tariff->validate(s.grid);

  std::int64_t next_id = 1;
  for (int t = 0; t + 1 < horizon; ++t) {
    for (std::size_t b = 0; b < netload.kw.size(); ++b) {
      const double load = netload.kw[b][static_cast<std::size_t>(t)];
      if (!(load < 0.0)) continue;
      const double surplus = -load;
      Request r;
      r.id = next_id;
      r.arrival_index = next_id;
      ++next_id;
      for (int k = 1; k <= params.discharge_window && t + k < horizon; ++k) {
        std::vector<double> kw(static_cast<std::size_t>(k + 1), 0.0);
        kw.front() = surplus;
        kw.back() = -surplus;
        ChargeProfile profile(t, std::move(kw));
        const double v = valuation_solar(profile, *s.tariff, s.grid);
        r.options.push_back(make_option(s.grid, t, t + k, std::move(profile), v));
      }
      s.requests.push_back(std::move(r));
    }
  }
  try {
    s.bounds = estimate_bounds(s.requests, s.grid);
  } catch (const CannotEstimateError&) {
    s.bounds = ValuationBounds::uniform(1.0, 1.0);
  }
  s.provenance = {"casestudy", 0};
  return s;
}

}  // namespace ces
