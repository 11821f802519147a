#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ces/harness.hpp"
#include "ces/io.hpp"
#include "json.hpp"

namespace ces {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("ces_harness_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(Command command, const std::string& sub = "out") {
    RunConfig c;
    c.command = command;
    c.output_dir = (dir_ / sub).string();
    return c;
  }

  static RunConfig with_gen(RunConfig c, const std::string& name) {
    GeneratorArgs g;
    g.name = name;
    c.generator = g;
    return c;
  }

  int run(const RunConfig& c) {
    out_.str("");
    err_.str("");
    return run_command(c, out_, err_);
  }

  std::string slurp(const std::string& sub, const std::string& name) {
    return read_file((dir_ / sub / name).string());
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(HarnessTest, SimulateIntuitive) {
  ASSERT_EQ(run(with_gen(config(Command::kSimulate), "intuitive")), kExitOk) << err_.str();
  const json summary = json::parse(slurp("out", "summary.json"));
  EXPECT_EQ(summary["welfare"].get<double>(), 40.0);
  EXPECT_EQ(summary["accepted_count"].get<int>(), 4);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trace.csv"));
}

TEST_F(HarnessTest, SimulateEmptyScenario) {
  Scenario empty = gen_random(1, 0, 1, 0.01);
  write_file((dir_ / "empty.json").string(), scenario_to_json(empty));
  RunConfig c = config(Command::kSimulate);
  c.scenario_path = (dir_ / "empty.json").string();
  ASSERT_EQ(run(c), kExitOk) << err_.str();
  EXPECT_EQ(json::parse(slurp("out", "summary.json"))["welfare"].get<double>(), 0.0);
}

TEST_F(HarnessTest, MalformedScenarioExitsTwo) {
  json j = json::parse(scenario_to_json(gen_intuitive(std::vector<double>(10, 5.0))));
  j["requests"][0]["options"][0]["charge"].push_back({7, 1.0});
  write_file((dir_ / "bad.json").string(), j.dump());
  RunConfig c = config(Command::kSimulate);
  c.scenario_path = (dir_ / "bad.json").string();
  EXPECT_EQ(run(c), kExitInputError);
  EXPECT_NE(err_.str().find("input error"), std::string::npos);

  c.scenario_path = (dir_ / "missing.json").string();
  EXPECT_EQ(run(c), kExitInputError);
}

TEST_F(HarnessTest, SourceIsExclusive) {
  RunConfig c = with_gen(config(Command::kSimulate), "intuitive");
  c.scenario_path = "x.json";
  EXPECT_EQ(run(c), kExitInputError);
  EXPECT_EQ(run(config(Command::kSimulate)), kExitInputError);
  EXPECT_EQ(run(with_gen(config(Command::kSimulate), "nope")), kExitInputError);
}

TEST_F(HarnessTest, SimulateIsByteIdentical) {
  RunConfig a = with_gen(config(Command::kSimulate, "a"), "random");
  a.seed = 9;
  RunConfig b = a;
  b.output_dir = (dir_ / "b").string();
  ASSERT_EQ(run(a), kExitOk);
  ASSERT_EQ(run(b), kExitOk);
  EXPECT_EQ(slurp("a", "trace.csv"), slurp("b", "trace.csv"));
  EXPECT_EQ(slurp("a", "summary.json"), slurp("b", "summary.json"));
}

TEST_F(HarnessTest, CsvFormat) {
  RunConfig c = with_gen(config(Command::kSimulate), "intuitive");
  c.format = OutputFormat::kCsv;
  ASSERT_EQ(run(c), kExitOk);
  const std::string csv = slurp("out", "summary.csv");
  EXPECT_NE(csv.find("welfare,40\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("final_energy_usage[0],4\n"), std::string::npos) << csv;
}

TEST_F(HarnessTest, CompareWritesReportAndLedger) {
  RunConfig c = with_gen(config(Command::kCompare), "intuitive");
  c.generator->valuations = {10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  ASSERT_EQ(run(c), kExitOk) << err_.str();
  const json report = json::parse(slurp("out", "report.json"));
  EXPECT_EQ(report["opt_welfare"].get<double>(), 40.0);
  EXPECT_EQ(report["fcfs_welfare"].get<double>(), 40.0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "ledger.csv"));
  EXPECT_EQ(out_.str().rfind("opt=40 alg=", 0), 0u) << out_.str();
}

TEST_F(HarnessTest, CompareBatchEmitsDistribution) {
  RunConfig c = with_gen(config(Command::kCompare), "random");
  c.seeds = 100;
  ASSERT_EQ(run(c), kExitOk) << err_.str();
  const std::string csv = slurp("out", "ratios.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
}

TEST_F(HarnessTest, CapExceededExitsFour) {
  RunConfig c = with_gen(config(Command::kCompare), "random");
  c.generator->n_requests = 400;
  c.generator->opts_per_request = 3;
  EXPECT_EQ(run(c), kExitCapExceeded);
  c.command = Command::kOracle;
  EXPECT_EQ(run(c), kExitCapExceeded);
}

TEST_F(HarnessTest, OracleOutput) {
  RunConfig c = with_gen(config(Command::kOracle), "intuitive");
  c.method = OracleMethod::kExhaustive;
  ASSERT_EQ(run(c), kExitOk);
  const json j = json::parse(slurp("out", "oracle.json"));
  EXPECT_EQ(j["welfare"].get<double>(), 50.0);
  EXPECT_EQ(j["method"], "exhaustive");
  EXPECT_EQ(j["chosen"].size(), 5u);
}

TEST_F(HarnessTest, FuzzSingleSeed) {
  RunConfig c = config(Command::kFuzz);
  ASSERT_EQ(run(c), kExitOk) << err_.str();
  const std::string csv = slurp("out", "fuzz_matrix.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(out_.str(), "seeds=1 failed=0\n");
}

TEST_F(HarnessTest, FuzzParallelMatchesSerial) {
  RunConfig serial = config(Command::kFuzz, "serial");
  serial.seeds = 24;
  RunConfig parallel = serial;
  parallel.output_dir = (dir_ / "parallel").string();
  parallel.parallel = 4;
  ASSERT_EQ(run(serial), kExitOk) << err_.str();
  ASSERT_EQ(run(parallel), kExitOk) << err_.str();
  EXPECT_EQ(slurp("serial", "fuzz_matrix.csv"), slurp("parallel", "fuzz_matrix.csv"));
}

TEST_F(HarnessTest, FuzzFaultInjectionFails) {
  RunConfig c = config(Command::kFuzz);
  c.fault_injection = true;
  c.seeds = 5;
  EXPECT_EQ(run(c), kExitPropertyFailure);
  EXPECT_NE(err_.str().find("failed safety"), std::string::npos) << err_.str();
}

TEST_F(HarnessTest, WorstCaseReplays) {
  ASSERT_EQ(run(config(Command::kWorstCase)), kExitOk) << err_.str();
  const Scenario s = scenario_from_json(slurp("out", "scenario.json"));
  EXPECT_EQ(s.requests.size(), 10u);
  RunConfig again = config(Command::kCompare, "again");
  again.scenario_path = (dir_ / "out" / "scenario.json").string();
  ASSERT_EQ(run(again), kExitOk);
  EXPECT_EQ(slurp("out", "report.json"), slurp("again", "report.json"));
}

TEST_F(HarnessTest, CaseStudy) {
  RunConfig c = with_gen(config(Command::kCaseStudy), "casestudy");
  c.generator->netload_csv = CES_DATA_DIR "/netload_3bldg_48h.csv";
  c.generator->tariff_csv = CES_DATA_DIR "/tariff_tou_48h.csv";
  ASSERT_EQ(run(c), kExitOk) << err_.str();
  const json j = json::parse(slurp("out", "casestudy.json"));
  EXPECT_TRUE(j["energy_balance"].get<bool>());
  EXPECT_TRUE(j["valuation_check"].get<bool>());

  c.generator->tariff_csv = (dir_ / "missing.csv").string();
  EXPECT_EQ(run(c), kExitInputError);
}

}  // namespace
}  // namespace ces
