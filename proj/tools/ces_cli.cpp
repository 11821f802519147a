// ces_cli: online CES scheduling driver.
//
//   ces_cli simulate  --gen intuitive --out run/
//   ces_cli compare   --scenario s.json --out run/
//   ces_cli compare   --gen random --seed 1 --seeds 100 --out batch/
//   ces_cli fuzz      --seeds 1000 --parallel 4 --out fuzz/
//   ces_cli worstcase --epsilon 1e-6 --out wc/
//   ces_cli casestudy --gen casestudy --netload n.csv --tariff t.csv --out cs/
//
// Exit status: 0 ok, 1 property failure, 2 input error, 3 internal error,
// 4 oracle size cap exceeded.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ces/harness.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string gen;
  ces::GeneratorArgs args;
  std::string method = "bnb";
  std::string format = "json";
};

void add_source_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scenario", f.scenario, "scenario JSON file");
  cmd->add_option("--gen", f.gen, "generator: intuitive|worstcase|random|largebid|casestudy");
  cmd->add_option("--valuations", f.args.valuations, "intuitive: ten valuations in [1, 10]");
  cmd->add_option("--requests", f.args.n_requests, "random/largebid: request count");
  cmd->add_option("--options", f.args.opts_per_request, "random/largebid: options per request");
  cmd->add_option("--fraction", f.args.small_bid_fraction, "random: small-bid fraction");
  cmd->add_option("--scale", f.args.valuation_scale, "largebid: valuation upper-end scale");
  cmd->add_option("--epsilon", f.args.epsilon, "worstcase: margin above the posted price");
  cmd->add_option("--netload", f.args.netload_csv, "casestudy: net-load CSV");
  cmd->add_option("--tariff", f.args.tariff_csv, "casestudy: tariff CSV");
  cmd->add_option("--window", f.args.case_study.discharge_window, "casestudy: discharge window");
  cmd->add_option("--horizon", f.args.case_study.horizon_slots, "casestudy: slots (0 = all)");
  cmd->add_option("--energy-cap", f.args.case_study.ces.energy_cap, "casestudy: kWh");
  cmd->add_option("--charge-cap", f.args.case_study.ces.charge_cap, "casestudy: kW");
  cmd->add_option("--discharge-cap", f.args.case_study.ces.discharge_cap, "casestudy: kW");
  cmd->add_option("--slot-hours", f.args.case_study.slot_hours, "casestudy: hours per slot");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online posted-price scheduler for community energy storage"};
  app.require_subcommand(1);

  ces::RunConfig config;
  Flags flags;

  const std::map<std::string, ces::Command> commands = {
      {"simulate", ces::Command::kSimulate}, {"oracle", ces::Command::kOracle},
      {"compare", ces::Command::kCompare},   {"fuzz", ces::Command::kFuzz},
      {"worstcase", ces::Command::kWorstCase}, {"casestudy", ces::Command::kCaseStudy}};
  const std::map<std::string, std::string> help = {
      {"simulate", "run the online engine, write trace.csv and a summary"},
      {"oracle", "solve the offline optimum"},
      {"compare", "online vs offline vs first-come-first-serve"},
      {"fuzz", "property sweep over seeded random instances"},
      {"worstcase", "adversarial ten-user sequence"},
      {"casestudy", "requests built from net-load and tariff CSVs"}};

  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_source_flags(sub, flags);
    sub->add_option("--seed", config.seed, "first seed");
    sub->add_option("--seeds", config.seeds, "number of consecutive seeds");
    sub->add_option("--out", config.output_dir, "output directory");
    sub->add_option("--format", flags.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--parallel", config.parallel, "worker threads (fuzz)");
    sub->add_option("--method", flags.method, "oracle method: bnb|exhaustive")
        ->check(CLI::IsMember({"bnb", "exhaustive"}));
    sub->add_flag("--fault-injection", config.fault_injection,
                  "fuzz: large bids with the hard feasibility guard disabled");
    sub->callback([&config, command = command] { config.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ces::kExitInputError;
  }

  if (!flags.scenario.empty()) config.scenario_path = flags.scenario;
  if (!flags.gen.empty()) {
    flags.args.name = flags.gen;
    config.generator = flags.args;
  } else if (config.command == ces::Command::kWorstCase ||
             config.command == ces::Command::kFuzz) {
    // Generator tuning flags without --gen still apply.
    config.generator = flags.args;
  }
  config.format = flags.format == "csv" ? ces::OutputFormat::kCsv : ces::OutputFormat::kJson;
  config.method = flags.method == "exhaustive" ? ces::OracleMethod::kExhaustive
                                               : ces::OracleMethod::kBranchAndBound;
  return ces::run_command(config, std::cout, std::cerr);
}
