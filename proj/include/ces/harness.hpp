#pragma once

// Command drivers behind the ces_cli binary. Each command resolves a
// scenario (file or generator), runs it, writes its artifacts into the
// output directory and returns a process exit status.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ces/oracle.hpp"
#include "ces/scenario.hpp"

namespace ces {

enum ExitStatus : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitInputError = 2,
  kExitInternalError = 3,
  kExitCapExceeded = 4,
};

enum class Command { kSimulate, kOracle, kCompare, kFuzz, kWorstCase, kCaseStudy };
enum class OutputFormat { kJson, kCsv };

struct GeneratorArgs {
  // intuitive | worstcase | random | largebid | casestudy
  std::string name;
  std::vector<double> valuations;  // intuitive; default ten 10s
  int n_requests = 20;
  int opts_per_request = 3;
  double small_bid_fraction = 0.01;
  double valuation_scale = 1.0;  // largebid
  double epsilon = 1e-6;         // worstcase
  std::string netload_csv;       // casestudy
  std::string tariff_csv;
  CaseStudyParams case_study;
};

struct RunConfig {
  Command command = Command::kSimulate;
  std::optional<std::string> scenario_path;
  std::optional<GeneratorArgs> generator;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int seeds = 1;
  OutputFormat format = OutputFormat::kJson;
  int parallel = 1;
  OracleMethod method = OracleMethod::kBranchAndBound;
  // fuzz only: large-bid instances with the hard guard disabled.
  bool fault_injection = false;

  // Throws InputError unless exactly one scenario source is set (fuzz and
  // worstcase may omit both) and the counts are positive.
  void validate() const;
};

// Builds the scenario a config points at, using `seed` for seeded
// generators.
Scenario resolve_scenario(const RunConfig& config, std::uint64_t seed);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fuzz(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_worstcase(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_casestudy(const RunConfig& config, std::ostream& out, std::ostream& err);

// Dispatches on config.command and maps exceptions onto exit statuses.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ces
