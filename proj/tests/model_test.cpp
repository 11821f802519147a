#include <vector>

#include <gtest/gtest.h>

#include "ces/errors.hpp"
#include "ces/model.hpp"

namespace ces {
namespace {

std::vector<double> dense(const CapacityProfile& p, int slots) {
  std::vector<double> out;
  for (int t = 0; t < slots; ++t) out.push_back(p.at(t));
  return out;
}

TEST(CapacityProfileTest, ChargeHoldDischarge) {
  const TimeGrid grid{4, 1.0};
  const CapacityProfile cap =
      derive_capacity_profile(ChargeProfile::dense({5.0, 0.0, -5.0, 0.0}), grid);
  EXPECT_EQ(dense(cap, 4), (std::vector<double>{5.0, 5.0, 5.0, 0.0}));
}

TEST(CapacityProfileTest, HalfHourSlots) {
  const TimeGrid grid{3, 0.5};
  const CapacityProfile cap =
      derive_capacity_profile(ChargeProfile::dense({2.0, -2.0, 0.0}), grid);
  EXPECT_EQ(dense(cap, 3), (std::vector<double>{1.0, 1.0, 0.0}));
}

TEST(CapacityProfileTest, ResidualEnergyStaysReserved) {
  const TimeGrid grid{5, 1.0};
  const CapacityProfile cap =
      derive_capacity_profile(ChargeProfile(1, {2.0, -1.0}), grid);
  EXPECT_EQ(dense(cap, 5), (std::vector<double>{0.0, 2.0, 2.0, 1.0, 1.0}));
}

TEST(CapacityProfileTest, EmptyProfile) {
  const TimeGrid grid{4, 1.0};
  EXPECT_EQ(dense(derive_capacity_profile(ChargeProfile{}, grid), 4),
            std::vector<double>(4, 0.0));
}

TEST(CapacityProfileTest, Errors) {
  const TimeGrid grid{4, 1.0};
  EXPECT_THROW(derive_capacity_profile(ChargeProfile::dense({-1.0, 1.0}), grid),
               MalformedProfileError);
  EXPECT_THROW(derive_capacity_profile(ChargeProfile(3, {1.0, -1.0}), grid), DimensionError);
  EXPECT_THROW(derive_capacity_profile(ChargeProfile(-1, {1.0}), grid), DimensionError);
}

TEST(ValuationTest, DisplacedGridCost) {
  const TimeGrid grid{6, 1.0};
  const TariffProfile tariff{{0.05, 0.07, 0.09, 0.11, 0.2, 0.3}};
  // 5 kW surplus stored at slot 0 and released at slot 3.
  const ChargeProfile p = ChargeProfile::dense({5.0, 0.0, 0.0, -5.0});
  EXPECT_NEAR(valuation_solar(p, tariff, grid), 0.55, 1e-12);
  EXPECT_NEAR(valuation_arbitrage(p, tariff, grid), 0.55 - 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(net_energy(p, grid), 0.0);
}

TEST(ValuationTest, TariffLengthMismatch) {
  const TimeGrid grid{6, 1.0};
  const TariffProfile tariff{{0.1, 0.1}};
  EXPECT_THROW(tariff.validate(grid), DimensionError);
  EXPECT_THROW((TariffProfile{{0.1, -0.1, 0.1, 0.1, 0.1, 0.1}}.validate(grid)), InputError);
}

TEST(ModelTest, ConfigValidation) {
  EXPECT_THROW((TimeGrid{0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((TimeGrid{4, 0.0}.validate()), ConfigError);
  EXPECT_THROW((CesConfig{0.0, 1.0, 1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((CesConfig{1.0, 1.0, 1.0}.validate()));
}

TEST(ModelTest, MakeOption) {
  const TimeGrid grid{4, 1.0};
  const ScheduleOption o = make_option(grid, 1, 3, ChargeProfile(1, {1.0, 0.0, -1.0}), 2.0);
  EXPECT_EQ(o.capacity.at(1), 1.0);
  EXPECT_EQ(o.capacity.at(3), 1.0);
  EXPECT_EQ(o.capacity.at(0), 0.0);
  EXPECT_THROW(make_option(grid, 2, 4, ChargeProfile(2, {1.0, -1.0}), 1.0), DimensionError);
  EXPECT_THROW(make_option(grid, 1, 3, ChargeProfile(0, {1.0, -1.0}), 1.0), DimensionError);
  EXPECT_THROW(make_option(grid, 0, 1, ChargeProfile(0, {1.0, -1.0}), -1.0), InputError);
}

TEST(ModelTest, DuplicateRequestIds) {
  const TimeGrid grid{4, 1.0};
  const ScheduleOption o = make_option(grid, 0, 1, ChargeProfile(0, {1.0, -1.0}), 1.0);
  const std::vector<Request> requests = {{7, 1, {o}}, {7, 2, {o}}};
  EXPECT_THROW(validate_requests(requests, grid), InputError);
}

}  // namespace
}  // namespace ces
