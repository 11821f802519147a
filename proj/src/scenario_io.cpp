#include <fstream>
#include <set>
#include <sstream>

#include "ces/errors.hpp"
#include "ces/io.hpp"
#include "json.hpp"

namespace ces {

using nlohmann::json;

namespace {

json option_to_json(const ScheduleOption& o) {
  json charge = json::array();
  for (int t = o.charge.first_slot(); t < o.charge.end_slot(); ++t) {
    if (o.charge.at(t) != 0.0) charge.push_back({t, o.charge.at(t)});
  }
  return {{"start_slot", o.start_slot},
          {"end_slot", o.end_slot},
          {"charge", std::move(charge)},
          {"valuation", o.valuation}};
}

ScheduleOption option_from_json(const json& j, const TimeGrid& grid) {
  const int start = j.at("start_slot").get<int>();
  const int end = j.at("end_slot").get<int>();
  if (!grid.contains(start) || !grid.contains(end) || start > end) {
    throw InputError("option window [" + std::to_string(start) + ", " +
                     std::to_string(end) + "] outside the grid");
  }
  std::vector<double> kw(static_cast<std::size_t>(end - start + 1), 0.0);
  std::set<int> seen;
  for (const json& pair : j.at("charge")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw InputError("charge entries must be [slot, kW] pairs");
    }
    const int slot = pair[0].get<int>();
    if (slot < start || slot > end) {
      throw InputError("charge slot " + std::to_string(slot) +
                       " outside option window or grid");
    }
    if (!seen.insert(slot).second) {
      throw InputError("charge slot " + std::to_string(slot) + " listed twice");
    }
    kw[static_cast<std::size_t>(slot - start)] = pair[1].get<double>();
  }
  return make_option(grid, start, end, ChargeProfile(start, std::move(kw)),
                     j.at("valuation").get<double>());
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["grid"] = {{"slot_count", s.grid.slot_count}, {"slot_hours", s.grid.slot_hours}};
  j["ces"] = {{"energy_cap", s.ces.energy_cap},
              {"charge_cap", s.ces.charge_cap},
              {"discharge_cap", s.ces.discharge_cap}};
  j["bounds"] = {{"l_e", s.bounds.l_e}, {"u_e", s.bounds.u_e},
                 {"l_c", s.bounds.l_c}, {"u_c", s.bounds.u_c},
                 {"l_d", s.bounds.l_d}, {"u_d", s.bounds.u_d}};
  json requests = json::array();
  for (const Request& r : s.requests) {
    json options = json::array();
    for (const ScheduleOption& o : r.options) options.push_back(option_to_json(o));
    requests.push_back(
        {{"id", r.id}, {"arrival_index", r.arrival_index}, {"options", std::move(options)}});
  }
  j["requests"] = std::move(requests);
  if (s.tariff) j["tariff"] = s.tariff->price_per_kwh;
  j["provenance"] = {{"generator", s.provenance.generator}, {"seed", s.provenance.seed}};
  return j.dump(1) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Scenario s;
    s.grid.slot_count = j.at("grid").at("slot_count").get<int>();
    s.grid.slot_hours = j.at("grid").at("slot_hours").get<double>();
    s.grid.validate();
    const json& c = j.at("ces");
    s.ces = {c.at("energy_cap").get<double>(), c.at("charge_cap").get<double>(),
             c.at("discharge_cap").get<double>()};
    const json& b = j.at("bounds");
    s.bounds = {b.at("l_e").get<double>(), b.at("u_e").get<double>(),
                b.at("l_c").get<double>(), b.at("u_c").get<double>(),
                b.at("l_d").get<double>(), b.at("u_d").get<double>()};
    for (const json& rj : j.at("requests")) {
      Request r;
      r.id = rj.at("id").get<std::int64_t>();
      r.arrival_index = rj.at("arrival_index").get<std::int64_t>();
      for (const json& oj : rj.at("options")) r.options.push_back(option_from_json(oj, s.grid));
      s.requests.push_back(std::move(r));
    }
    if (j.contains("tariff")) {
      s.tariff = TariffProfile{j.at("tariff").get<std::vector<double>>()};
    }
    if (j.contains("provenance")) {
      const json& p = j.at("provenance");
      s.provenance.generator = p.value("generator", std::string{});
      s.provenance.seed = p.value("seed", std::uint64_t{0});
    }
    validate_scenario(s);
    return s;
  } catch (const InputError&) {
    throw;
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario JSON: ") + e.what());
  } catch (const Error& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace ces
