#include "ces/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "ces/errors.hpp"
#include "ces/io.hpp"
#include "ces/properties.hpp"
#include "json.hpp"

namespace ces {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  const bool needs_source = command != Command::kFuzz && command != Command::kWorstCase;
  if (scenario_path && generator) {
    throw InputError("--scenario and --gen are mutually exclusive");
  }
  if (needs_source && !scenario_path && !generator) {
    throw InputError("a scenario source is required: --scenario PATH or --gen NAME");
  }
  if (seeds < 1) throw InputError("--seeds must be >= 1");
  if (parallel < 1) throw InputError("--parallel must be >= 1");
  if (seeds > 1 && scenario_path) {
    throw InputError("--seeds needs a seeded generator, not a scenario file");
  }
}

namespace {

fs::path out_path(const RunConfig& config, const std::string& name) {
  return fs::path(config.output_dir) / name;
}

void write_out(const RunConfig& config, const std::string& name, const std::string& text) {
  write_file(out_path(config, name).string(), text);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

// ALG / OPT as a percentage; 100 when OPT is zero.
double pct_of_opt(double welfare, double opt) { return opt > 0.0 ? 100.0 * welfare / opt : 100.0; }

std::string one_line(const RatioReport& r) {
  std::ostringstream ss;
  ss << "opt=" << fmt(r.opt_welfare) << " alg=" << fmt(r.alg_welfare)
     << " fcfs=" << fmt(r.fcfs_welfare)
     << " ratio=" << (r.ratio_infinite ? std::string("inf") : fmt(r.empirical_ratio))
     << " alpha=" << fmt(r.theoretical_alpha)
     << " alg/opt=" << fmt(pct_of_opt(r.alg_welfare, r.opt_welfare)) << "%"
     << " fcfs/opt=" << fmt(pct_of_opt(r.fcfs_welfare, r.opt_welfare)) << "%";
  return ss.str();
}

void write_report(const RunConfig& config, const RatioReport& r) {
  if (config.format == OutputFormat::kJson) {
    write_out(config, "report.json", ratio_report_to_json(r));
  } else {
    write_out(config, "report.csv", ratio_report_to_csv(r));
  }
}

void write_summary(const RunConfig& config, const RunResult& run) {
  if (config.format == OutputFormat::kJson) {
    write_out(config, "summary.json", summary_to_json(run));
  } else {
    write_out(config, "summary.csv", summary_to_csv(run));
  }
}

void write_trace(const RunConfig& config, const RunResult& run) {
  std::ostringstream trace;
  write_decision_trace(trace, run.decisions, run);
  write_out(config, "trace.csv", trace.str());
}

void write_ledger_csv(const RunConfig& config, const RunResult& run) {
  std::ostringstream ledger;
  write_ledger(ledger, run);
  write_out(config, "ledger.csv", ledger.str());
}

// Checks that must hold for every run of a correct engine; a failure here is
// an internal error, not a property of the input.
const PropertyResult* engine_invariant_failure(const RunResult& run, const EngineConfig& config,
                                               PropertyResult (&slots)[3]) {
  slots[0] = check_safety(run, config.ces);
  slots[1] = check_individual_rationality(run);
  slots[2] = check_ledger(run, config);
  for (const PropertyResult& r : slots) {
    if (!r.passed) return &r;
  }
  return nullptr;
}

void prepare_output(const RunConfig& config) { fs::create_directories(config.output_dir); }

}  // namespace

Scenario resolve_scenario(const RunConfig& config, std::uint64_t seed) {
  if (config.scenario_path) return scenario_from_json(read_file(*config.scenario_path));
  if (!config.generator) throw InputError("no scenario source");
  const GeneratorArgs& g = *config.generator;
  if (g.name == "intuitive") {
    const std::vector<double> v = g.valuations.empty() ? std::vector<double>(10, 10.0)
                                                       : g.valuations;
    return gen_intuitive(v);
  }
  if (g.name == "worstcase") return gen_worst_case(g.epsilon);
  if (g.name == "random") {
    return gen_random(seed, g.n_requests, g.opts_per_request, g.small_bid_fraction);
  }
  if (g.name == "largebid") {
    return gen_large_bid(seed, g.n_requests, g.opts_per_request, g.valuation_scale);
  }
  if (g.name == "casestudy") {
    if (g.netload_csv.empty() || g.tariff_csv.empty()) {
      throw InputError("casestudy needs --netload and --tariff");
    }
    return gen_case_study(parse_netload_csv(read_file(g.netload_csv)),
                          parse_tariff_csv(read_file(g.tariff_csv)), g.case_study);
  }
  throw InputError("unknown generator '" + g.name + "'");
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Scenario scenario = resolve_scenario(config, config.seed);
  const EngineConfig engine = scenario.engine_config();
  const RunResult run = run_sequence(scenario.requests, engine);
  PropertyResult slots[3];
  if (const PropertyResult* bad = engine_invariant_failure(run, engine, slots)) {
    err << "internal invariant breach: " << bad->name << ": " << bad->detail << "\n";
    return kExitInternalError;
  }
  prepare_output(config);
  write_trace(config, run);
  write_summary(config, run);
  std::size_t accepted = run.final_state.allocations.size();
  out << "welfare=" << fmt(run.welfare) << " accepted=" << accepted
      << " denied=" << run.decisions.size() - accepted << "\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Scenario scenario = resolve_scenario(config, config.seed);
  const OfflineSolution sol =
      solve_offline(scenario.requests, scenario.ces, scenario.grid, config.method);
  prepare_output(config);
  if (config.format == OutputFormat::kJson) {
    json chosen = json::array();
    for (const auto& [id, option] : sol.chosen) chosen.push_back({id, option});
    const json j = {{"welfare", sol.welfare},
                    {"node_count", sol.node_count},
                    {"method", config.method == OracleMethod::kExhaustive ? "exhaustive"
                                                                         : "branch-and-bound"},
                    {"chosen", std::move(chosen)}};
    write_out(config, "oracle.json", j.dump(1) + "\n");
  } else {
    std::ostringstream csv;
    csv << "request_id,option_index\n";
    for (const auto& [id, option] : sol.chosen) csv << id << ',' << option << '\n';
    write_out(config, "oracle.csv", csv.str());
  }
  out << "opt=" << fmt(sol.welfare) << " chosen=" << sol.chosen.size()
      << " nodes=" << sol.node_count << "\n";
  return kExitOk;
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
  prepare_output(config);
  if (config.seeds == 1) {
    const Scenario scenario = resolve_scenario(config, config.seed);
    const ComparisonRun cmp = compare(scenario.requests, scenario.engine_config(), config.method);
    write_report(config, cmp.report);
    write_ledger_csv(config, cmp.online);
    out << one_line(cmp.report) << "\n";
    if (cmp.report.exceeds_alpha) {
      err << "empirical ratio exceeds alpha\n";
      return kExitPropertyFailure;
    }
    return kExitOk;
  }

  // Seed batch: one distribution row per seed.
  std::ostringstream csv;
  csv << std::setprecision(12);
  csv << "seed,opt_welfare,alg_welfare,fcfs_welfare,empirical_ratio,theoretical_alpha,"
         "exceeds_alpha\n";
  std::optional<std::uint64_t> first_bad;
  double worst = 0.0;
  for (int i = 0; i < config.seeds; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    const Scenario scenario = resolve_scenario(config, seed);
    const RatioReport r =
        compare(scenario.requests, scenario.engine_config(), config.method).report;
    const bool bad = r.exceeds_alpha || r.ratio_infinite;
    if (bad && !first_bad) first_bad = seed;
    worst = std::max(worst, r.empirical_ratio);
    csv << seed << ',' << r.opt_welfare << ',' << r.alg_welfare << ',' << r.fcfs_welfare << ','
        << (r.ratio_infinite ? std::string("inf") : fmt(r.empirical_ratio)) << ','
        << r.theoretical_alpha << ',' << (bad ? 1 : 0) << '\n';
  }
  write_out(config, "ratios.csv", csv.str());
  out << "seeds=" << config.seeds << " worst_ratio=" << fmt(worst) << "\n";
  if (first_bad) {
    err << "seed " << *first_bad << ": empirical ratio exceeds alpha\n";
    return kExitPropertyFailure;
  }
  return kExitOk;
}

int cmd_fuzz(const RunConfig& config, std::ostream& out, std::ostream& err) {
  GeneratorArgs gen = config.generator.value_or(GeneratorArgs{});
  if (gen.name.empty()) gen.name = config.fault_injection ? "largebid" : "random";
  if (gen.name != "random" && gen.name != "largebid") {
    throw InputError("fuzz runs the random or largebid generator");
  }
  RunConfig per_seed = config;
  per_seed.scenario_path.reset();
  per_seed.generator = gen;

  CheckOptions options;
  options.hard_guard = !config.fault_injection;
  options.theorem_checks = gen.name == "random";
  options.method = config.method;

  struct Outcome {
    InstanceCheck check;
    std::string error;
    int error_status = kExitOk;
  };
  const auto n = static_cast<std::size_t>(config.seeds);
  std::vector<Outcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      Outcome& o = outcomes[i];
      try {
        o.check = check_instance(resolve_scenario(per_seed, config.seed + i), options);
      } catch (const CapExceededError& e) {
        o.error = e.what();
        o.error_status = kExitCapExceeded;
      } catch (const InputError& e) {
        o.error = e.what();
        o.error_status = kExitInputError;
      } catch (const std::exception& e) {
        o.error = e.what();
        o.error_status = kExitInternalError;
      }
    }
  };
  const int threads = std::min<int>(config.parallel, config.seeds);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ostringstream csv;
  csv << "seed";
  for (const char* name : kPropertyNames) csv << ',' << name;
  csv << ",all\n";
  std::size_t failed = 0;
  const Outcome* first = nullptr;
  std::uint64_t first_seed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome& o = outcomes[i];
    csv << config.seed + i;
    if (!o.error.empty()) {
      for (std::size_t k = 0; k < std::size(kPropertyNames); ++k) csv << ",error";
      csv << ",error\n";
    } else {
      for (const PropertyResult& r : o.check.results) {
        csv << ',' << (r.skipped ? "skip" : r.passed ? "pass" : "fail");
      }
      csv << ',' << (o.check.passed() ? "pass" : "fail") << '\n';
    }
    if (!o.error.empty() || !o.check.passed()) {
      ++failed;
      if (!first) {
        first = &o;
        first_seed = config.seed + i;
      }
    }
  }
  prepare_output(config);
  write_out(config, "fuzz_matrix.csv", csv.str());
  out << "seeds=" << n << " failed=" << failed << "\n";
  if (!first) return kExitOk;
  if (!first->error.empty()) {
    err << "seed " << first_seed << ": " << first->error << "\n";
    return first->error_status;
  }
  const PropertyResult* bad = first->check.first_failure();
  err << "seed " << first_seed << " failed " << bad->name << ": " << bad->detail << "\n";
  return kExitPropertyFailure;
}

int cmd_worstcase(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const double epsilon = config.generator ? config.generator->epsilon : 1e-6;
  const Scenario scenario = gen_worst_case(epsilon);
  const ComparisonRun cmp = compare(scenario.requests, scenario.engine_config(), config.method);
  prepare_output(config);
  write_out(config, "scenario.json", scenario_to_json(scenario));
  write_report(config, cmp.report);
  write_ledger_csv(config, cmp.online);
  write_trace(config, cmp.online);
  out << one_line(cmp.report) << "\n";
  if (cmp.report.exceeds_alpha) {
    err << "empirical ratio exceeds alpha\n";
    return kExitPropertyFailure;
  }
  return kExitOk;
}

int cmd_casestudy(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Scenario scenario = resolve_scenario(config, config.seed);
  if (!scenario.tariff) throw InputError("case study needs a tariff");
  const EngineConfig engine = scenario.engine_config();
  const RunResult run = run_sequence(scenario.requests, engine);
  PropertyResult slots[3];
  if (const PropertyResult* bad = engine_invariant_failure(run, engine, slots)) {
    err << "internal invariant breach: " << bad->name << ": " << bad->detail << "\n";
    return kExitInternalError;
  }
  const CaseStudyCheck cs = check_case_study(scenario, run);

  std::size_t options = 0;
  for (const Request& r : scenario.requests) options += r.options.size();
  const json j = {{"requests", scenario.requests.size()},
                  {"options", options},
                  {"accepted", cs.accepted},
                  {"welfare", run.welfare},
                  {"charged_kwh", cs.charged_kwh},
                  {"discharged_kwh", cs.discharged_kwh},
                  {"max_valuation_error", cs.max_valuation_error},
                  {"energy_balance", cs.balance.passed},
                  {"valuation_check", cs.valuation.passed}};
  prepare_output(config);
  write_trace(config, run);
  write_summary(config, run);
  if (config.format == OutputFormat::kJson) {
    write_out(config, "casestudy.json", j.dump(1) + "\n");
  } else {
    std::ostringstream csv;
    csv << std::setprecision(12) << "key,value\n";
    for (const auto& [key, value] : j.items()) csv << key << ',' << value.dump() << '\n';
    write_out(config, "casestudy.csv", csv.str());
  }
  out << "requests=" << scenario.requests.size() << " accepted=" << cs.accepted
      << " welfare=" << fmt(run.welfare) << " charged_kwh=" << fmt(cs.charged_kwh)
      << " discharged_kwh=" << fmt(cs.discharged_kwh) << "\n";
  for (const PropertyResult* r : {&cs.balance, &cs.valuation}) {
    if (!r->passed) {
      err << r->name << ": " << r->detail << "\n";
      return kExitPropertyFailure;
    }
  }
  return kExitOk;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::kSimulate:
        return cmd_simulate(config, out, err);
      case Command::kOracle:
        return cmd_oracle(config, out, err);
      case Command::kCompare:
        return cmd_compare(config, out, err);
      case Command::kFuzz:
        return cmd_fuzz(config, out, err);
      case Command::kWorstCase:
        return cmd_worstcase(config, out, err);
      case Command::kCaseStudy:
        return cmd_casestudy(config, out, err);
    }
    return kExitInternalError;
  } catch (const CapExceededError& e) {
    err << "size cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const MalformedProfileError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CannotEstimateError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace ces
