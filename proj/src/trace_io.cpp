#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ces/io.hpp"
#include "json.hpp"

namespace ces {

using nlohmann::json;

namespace {

std::string fmt12(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

// JSON has no infinity; write null instead.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const RatioReport& r) {
  return {{"opt_welfare", r.opt_welfare},
          {"alg_welfare", r.alg_welfare},
          {"fcfs_welfare", r.fcfs_welfare},
          {"empirical_ratio", finite_or_null(r.empirical_ratio)},
          {"theoretical_alpha", r.theoretical_alpha},
          {"d0_over_opt", finite_or_null(r.d0_over_opt)},
          {"ratio_infinite", r.ratio_infinite},
          {"exceeds_alpha", r.exceeds_alpha}};
}

json summary_json(const RunResult& run) {
  std::size_t accepted = 0;
  for (const Decision& d : run.decisions) accepted += d.accepted() ? 1 : 0;
  return {{"welfare", run.welfare},
          {"accepted_count", accepted},
          {"denied_count", run.decisions.size() - accepted},
          {"final_energy_usage", run.final_state.usage.energy},
          {"final_power_usage", run.final_state.usage.power}};
}

std::string flat_csv(const json& j) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        out << key << '[' << i << "]," << fmt12(value[i].get<double>()) << '\n';
      }
    } else if (value.is_number_float()) {
      out << key << ',' << fmt12(value.get<double>()) << '\n';
    } else if (value.is_null()) {
      out << key << ",inf\n";
    } else {
      out << key << ',' << value.dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace

void write_decision_trace(std::ostream& out, std::span<const Decision> decisions,
                          const RunResult& run) {
  out << "step,request_id,outcome,option_index,valuation,payment,utility,P_n,D_n\n";
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Decision& d = decisions[i];
    const TraceStep& step = run.trace[i + 1];
    out << (i + 1) << ',' << d.request_id << ',';
    if (d.accepted()) {
      const Accepted& a = d.accepted_outcome();
      out << "accepted," << a.option_index << ',' << fmt12(d.valuation) << ','
          << fmt12(a.payment) << ',' << fmt12(a.utility);
    } else {
      out << "denied:" << to_string(std::get<Denied>(d.outcome).reason) << ",,"
          << fmt12(d.valuation) << ",,";
    }
    out << ',' << fmt12(step.primal) << ',' << fmt12(step.dual) << '\n';
  }
}

void write_ledger(std::ostream& out, const RunResult& run) {
  out << "step,P_n,D_n\n";
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    out << i << ',' << fmt12(run.trace[i].primal) << ',' << fmt12(run.trace[i].dual) << '\n';
  }
}

std::string summary_to_json(const RunResult& run) { return summary_json(run).dump(1) + "\n"; }

std::string ratio_report_to_json(const RatioReport& report) {
  return report_json(report).dump(1) + "\n";
}

std::string summary_to_csv(const RunResult& run) { return flat_csv(summary_json(run)); }

std::string ratio_report_to_csv(const RatioReport& report) {
  return flat_csv(report_json(report));
}

}  // namespace ces
