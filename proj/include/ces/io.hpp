#pragma once

// Serialization: scenario JSON, decision-trace and ledger CSVs, run summary
// and ratio report JSON.

#include <iosfwd>
#include <span>
#include <string>

#include "ces/engine.hpp"
#include "ces/oracle.hpp"
#include "ces/scenario.hpp"

namespace ces {

// Scenario JSON:
//   {"grid": {"slot_count", "slot_hours"},
//    "ces": {"energy_cap", "charge_cap", "discharge_cap"},
//    "bounds": {"l_e", "u_e", "l_c", "u_c", "l_d", "u_d"},
//    "requests": [{"id", "arrival_index",
//                  "options": [{"start_slot", "end_slot",
//                               "charge": [[slot, kW], ...], "valuation"}]}],
//    "tariff": [$/kWh per slot]                       (optional)
//    "provenance": {"generator", "seed"}}             (optional)
// Capacity profiles are derived on load and never written.
std::string scenario_to_json(const Scenario& scenario);
// Throws InputError on any schema or validation failure.
Scenario scenario_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// step,request_id,outcome,option_index,valuation,payment,utility,P_n,D_n
// with 12 significant digits. Denied rows leave option_index, payment and
// utility empty and carry the denial reason in outcome.
void write_decision_trace(std::ostream& out, std::span<const Decision> decisions,
                          const RunResult& run);

// step,P_n,D_n for steps 0..N.
void write_ledger(std::ostream& out, const RunResult& run);

std::string summary_to_json(const RunResult& run);
std::string ratio_report_to_json(const RatioReport& report);

// Flat key,value rendering of the summary/report for --format csv.
std::string summary_to_csv(const RunResult& run);
std::string ratio_report_to_csv(const RatioReport& report);

}  // namespace ces
