#include "ces/properties.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "ces/errors.hpp"

namespace ces {

namespace {

constexpr double kLedgerRelTol = 1e-9;

PropertyResult fail(const char* name, const std::string& detail) {
  return {name, false, false, detail};
}

PropertyResult pass(const char* name) { return {name, true, false, ""}; }

PropertyResult skip(const char* name) { return {name, true, true, ""}; }

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::ostringstream detail_stream() {
  std::ostringstream ss;
  ss << std::setprecision(12);
  return ss;
}

}  // namespace

PropertyResult check_safety(const RunResult& run, const CesConfig& ces) {
  for (std::size_t n = 0; n < run.trace.size(); ++n) {
    const UsageVector& u = run.trace[n].usage;
    for (std::size_t t = 0; t < u.energy.size(); ++t) {
      const double e = u.energy[t];
      const double p = u.power[t];
      if (e < 0.0 || e > ces.energy_cap || p > ces.charge_cap || p < -ces.discharge_cap) {
        auto ss = detail_stream();
        ss << "step " << n << " slot " << t << ": y_e=" << e << " y_c=" << p;
        return fail("safety", ss.str());
      }
    }
  }
  return pass("safety");
}

PropertyResult check_individual_rationality(const RunResult& run) {
  for (const Decision& d : run.decisions) {
    if (!d.accepted()) continue;
    const Accepted& a = d.accepted_outcome();
    const double surplus = d.valuation - a.payment;
    if (!(surplus > 0.0) || std::abs(surplus - a.utility) > 1e-9) {
      auto ss = detail_stream();
      ss << "request " << d.request_id << ": valuation=" << d.valuation
         << " payment=" << a.payment << " utility=" << a.utility;
      return fail("individual_rationality", ss.str());
    }
  }
  return pass("individual_rationality");
}

PropertyResult check_ledger(const RunResult& run, const EngineConfig& config) {
  const std::vector<double>& utilities = run.final_state.utilities;
  double primal = 0.0;
  EngineState snapshot;
  for (std::size_t n = 0; n < run.trace.size(); ++n) {
    if (n > 0) {
      const Decision& d = run.decisions[n - 1];
      if (d.accepted()) primal += d.valuation;
      snapshot.utilities.push_back(utilities[n - 1]);
    }
    snapshot.usage = run.trace[n].usage;
    const double dual = dual_objective(snapshot, config);
    if (!close_rel(run.trace[n].primal, primal, kLedgerRelTol) ||
        !close_rel(run.trace[n].dual, dual, kLedgerRelTol)) {
      auto ss = detail_stream();
      ss << "step " << n << ": P=" << run.trace[n].primal << " expected " << primal
         << ", D=" << run.trace[n].dual << " expected " << dual;
      return fail("ledger", ss.str());
    }
  }
  if (run.welfare != run.trace.back().primal) {
    return fail("ledger", "welfare differs from the final primal ledger entry");
  }
  return pass("ledger");
}

PropertyResult check_increments(const RunResult& run, const ValuationBounds& bounds,
                                double slack) {
  const double alpha = increment_alpha(bounds);
  for (std::size_t n = 1; n < run.trace.size(); ++n) {
    const double dp = run.trace[n].primal - run.trace[n - 1].primal;
    const double dd = run.trace[n].dual - run.trace[n - 1].dual;
    const double rhs = dd / alpha - slack * std::abs(dd);
    if (dp < rhs) {
      const Decision& d = run.decisions[n - 1];
      auto ss = detail_stream();
      ss << "step " << n << " request " << d.request_id << ": dP=" << dp << " dD=" << dd
         << " alpha'=" << alpha << " dD/alpha'=" << dd / alpha << " slack=" << slack;
      if (d.accepted()) {
        ss << " option=" << d.accepted_outcome().option_index << " valuation=" << d.valuation
           << " payment=" << d.accepted_outcome().payment;
      }
      return fail("increments", ss.str());
    }
  }
  return pass("increments");
}

PropertyResult check_weak_duality(const RunResult& run, double opt_welfare,
                                  double tolerance) {
  const double dn = run.trace.back().dual;
  if (dn < opt_welfare - tolerance) {
    auto ss = detail_stream();
    ss << "D^N=" << dn << " < OPT=" << opt_welfare;
    return fail("weak_duality", ss.str());
  }
  return pass("weak_duality");
}

PropertyResult check_ratio(const RatioReport& r) {
  if (r.ratio_infinite || r.exceeds_alpha || r.empirical_ratio < 1.0 - 1e-9) {
    auto ss = detail_stream();
    ss << "OPT=" << r.opt_welfare << " ALG=" << r.alg_welfare
       << " ratio=" << r.empirical_ratio << " alpha=" << r.theoretical_alpha;
    return fail("ratio", ss.str());
  }
  return pass("ratio");
}

PropertyResult check_oracle(std::span<const Request> requests, const ComparisonRun& cmp,
                            const CesConfig& ces, const TimeGrid& grid) {
  if (!allocation_feasible(requests, cmp.offline.chosen, ces, grid)) {
    return fail("oracle", "offline allocation violates a battery limit");
  }
  if (!allocation_feasible(requests, cmp.fcfs.chosen, ces, grid)) {
    return fail("oracle", "FCFS allocation violates a battery limit");
  }
  if (cmp.fcfs.welfare > cmp.offline.welfare + 1e-9 ||
      cmp.online.welfare > cmp.offline.welfare + 1e-9) {
    auto ss = detail_stream();
    ss << "OPT=" << cmp.offline.welfare << " below FCFS=" << cmp.fcfs.welfare
       << " or ALG=" << cmp.online.welfare;
    return fail("oracle", ss.str());
  }
  return pass("oracle");
}

CaseStudyCheck check_case_study(const Scenario& scenario, const RunResult& run) {
  if (!scenario.tariff) throw InputError("case-study check needs a tariff");
  std::map<std::int64_t, const Request*> by_id;
  for (const Request& r : scenario.requests) by_id[r.id] = &r;

  CaseStudyCheck out;
  out.balance = pass("energy_balance");
  out.valuation = pass("valuation");
  for (const auto& [id, alloc] : run.final_state.allocations) {
    const ScheduleOption& o = by_id.at(id)->options[static_cast<std::size_t>(alloc.option_index)];
    ++out.accepted;
    for (double kw : o.charge.values()) {
      if (kw > 0.0) out.charged_kwh += kw * scenario.grid.slot_hours;
      if (kw < 0.0) out.discharged_kwh -= kw * scenario.grid.slot_hours;
    }
    const double expected = valuation_solar(o.charge, *scenario.tariff, scenario.grid);
    const double err = std::abs(o.valuation - expected);
    out.max_valuation_error = std::max(out.max_valuation_error, err);
    if (out.valuation.passed && !close_rel(o.valuation, expected, 1e-9)) {
      auto ss = detail_stream();
      ss << "request " << id << " option " << alloc.option_index << ": valuation "
         << o.valuation << " expected " << expected;
      out.valuation = fail("valuation", ss.str());
    }
  }
  if (std::abs(out.charged_kwh - out.discharged_kwh) > 1e-9) {
    auto ss = detail_stream();
    ss << "charged " << out.charged_kwh << " kWh, discharged " << out.discharged_kwh << " kWh";
    out.balance = fail("energy_balance", ss.str());
  }
  return out;
}

bool InstanceCheck::passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.passed; });
}

const PropertyResult* InstanceCheck::first_failure() const {
  for (const PropertyResult& r : results) {
    if (!r.passed) return &r;
  }
  return nullptr;
}

InstanceCheck check_instance(const Scenario& scenario, const CheckOptions& options) {
  EngineConfig config = scenario.engine_config();
  config.hard_guard = options.hard_guard;
  InstanceCheck out;

  RunResult run;
  try {
    run = run_sequence(scenario.requests, config);
  } catch (const DomainError& e) {
    out.results.push_back(fail("safety", std::string("engine tried to commit: ") + e.what()));
    for (std::size_t i = 1; i < std::size(kPropertyNames); ++i) {
      out.results.push_back(skip(kPropertyNames[i]));
    }
    return out;
  }

  out.results.push_back(check_safety(run, scenario.ces));
  out.results.push_back(check_individual_rationality(run));
  out.results.push_back(check_ledger(run, config));
  out.results.push_back(options.theorem_checks ? check_increments(run, scenario.bounds)
                                               : skip("increments"));
  if (!options.with_oracle) {
    out.results.push_back(skip("weak_duality"));
    out.results.push_back(skip("ratio"));
    out.results.push_back(skip("oracle"));
    return out;
  }

  // The engine is deterministic, so compare() replays exactly the run above.
  const ComparisonRun cmp = compare(scenario.requests, config, options.method);
  out.results.push_back(check_weak_duality(cmp.online, cmp.offline.welfare));
  const RatioReport& r = out.report.emplace(cmp.report);
  out.results.push_back(options.theorem_checks ? check_ratio(r) : skip("ratio"));
  out.results.push_back(check_oracle(scenario.requests, cmp, scenario.ces, scenario.grid));
  return out;
}

}  // namespace ces
