#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ces/errors.hpp"
#include "ces/io.hpp"
#include "json.hpp"

namespace ces {
namespace {

using nlohmann::json;

TEST(ScenarioJsonTest, RoundTripIsStable) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::string once = scenario_to_json(gen_random(seed, 12, 3, 0.03));
    EXPECT_EQ(scenario_to_json(scenario_from_json(once)), once);
  }
  Scenario with_tariff = gen_intuitive(std::vector<double>(10, 3.0));
  with_tariff.tariff = TariffProfile{{0.1, 0.2, 0.3, 0.4}};
  const std::string text = scenario_to_json(with_tariff);
  const Scenario back = scenario_from_json(text);
  ASSERT_TRUE(back.tariff.has_value());
  EXPECT_EQ(back.tariff->price_per_kwh, with_tariff.tariff->price_per_kwh);
  EXPECT_EQ(back.requests[0].options[0].capacity.at(1), 1.0);
}

json minimal() {
  return json::parse(R"({
    "grid": {"slot_count": 4, "slot_hours": 1.0},
    "ces": {"energy_cap": 5, "charge_cap": 5, "discharge_cap": 5},
    "bounds": {"l_e": 1, "u_e": 10, "l_c": 1, "u_c": 10, "l_d": 1, "u_d": 10},
    "requests": [{"id": 1, "arrival_index": 1, "options": [
      {"start_slot": 0, "end_slot": 3, "charge": [[0, 1.0], [2, -1.0]], "valuation": 4}]}]
  })");
}

TEST(ScenarioJsonTest, MinimalDocument) {
  const Scenario s = scenario_from_json(minimal().dump());
  ASSERT_EQ(s.requests.size(), 1u);
  EXPECT_EQ(s.requests[0].options[0].capacity.at(2), 1.0);
  EXPECT_FALSE(s.tariff.has_value());
}

TEST(ScenarioJsonTest, Rejections) {
  auto expect_input_error = [](const json& j) {
    EXPECT_THROW(scenario_from_json(j.dump()), InputError) << j.dump();
  };
  json j = minimal();
  j["requests"][0]["options"][0]["charge"][1][0] = 4;  // outside the grid
  expect_input_error(j);

  j = minimal();
  j["requests"][0]["options"][0]["charge"][1][0] = 0;  // listed twice
  expect_input_error(j);

  j = minimal();
  j["requests"][0]["options"][0]["start_slot"] = 1;  // charge before window
  expect_input_error(j);

  j = minimal();
  j["requests"][0]["options"][0]["charge"] = json::array({json::array({0, -1.0})});
  expect_input_error(j);  // discharges before charging

  j = minimal();
  j["requests"].push_back(j["requests"][0]);  // duplicate id, same arrival
  expect_input_error(j);

  j = minimal();
  j["bounds"]["u_d"] = 20;  // unequal ratios
  expect_input_error(j);

  j = minimal();
  j.erase("ces");
  expect_input_error(j);

  EXPECT_THROW(scenario_from_json("{not json"), InputError);
}

TEST(TraceCsvTest, Layout) {
  const Scenario s = gen_intuitive(std::vector<double>(10, 10.0));
  const RunResult run = run_sequence(s.requests, s.engine_config());
  std::ostringstream out;
  write_decision_trace(out, run.decisions, run);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,request_id,outcome,option_index,valuation,payment,utility,P_n,D_n");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,1,accepted,0,10,0.5,9.5,10,", 0), 0u) << line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("2,2,accepted,0,10,1.74296759502,", 0), 0u) << line;
  for (int i = 3; i <= 5; ++i) std::getline(in, line);
  EXPECT_EQ(line.rfind("5,5,denied:zero-or-negative-utility,,0,,,40,", 0), 0u) << line;
}

TEST(LedgerCsvTest, StepsFromZero) {
  const Scenario s = gen_intuitive(std::vector<double>(10, 10.0));
  const RunResult run = run_sequence(s.requests, s.engine_config());
  std::ostringstream out;
  write_ledger(out, run);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("step,P_n,D_n\n0,0,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
}

TEST(ReportJsonTest, FieldNamesAndInfinity) {
  RatioReport r;
  r.opt_welfare = 2.0;
  r.empirical_ratio = std::numeric_limits<double>::infinity();
  r.ratio_infinite = true;
  r.theoretical_alpha = 8.0;
  r.d0_over_opt = 3.0;
  const json j = json::parse(ratio_report_to_json(r));
  for (const char* key : {"opt_welfare", "alg_welfare", "fcfs_welfare", "empirical_ratio",
                          "theoretical_alpha", "d0_over_opt"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["empirical_ratio"].is_null());
  EXPECT_TRUE(j["ratio_infinite"].get<bool>());
  EXPECT_NE(ratio_report_to_csv(r).find("empirical_ratio,inf\n"), std::string::npos);
}

TEST(SummaryJsonTest, Fields) {
  const Scenario s = gen_intuitive(std::vector<double>(10, 10.0));
  const RunResult run = run_sequence(s.requests, s.engine_config());
  const json j = json::parse(summary_to_json(run));
  EXPECT_EQ(j["welfare"].get<double>(), 40.0);
  EXPECT_EQ(j["accepted_count"].get<int>(), 4);
  EXPECT_EQ(j["denied_count"].get<int>(), 6);
  EXPECT_EQ(j["final_energy_usage"].get<std::vector<double>>(),
            (std::vector<double>{4, 4, 4, 0}));
  EXPECT_EQ(j["final_power_usage"].get<std::vector<double>>(),
            (std::vector<double>{4, 0, -4, 0}));
}

}  // namespace
}  // namespace ces
