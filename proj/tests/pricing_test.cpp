#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ces/errors.hpp"
#include "ces/pricing.hpp"

namespace ces {
namespace {

// Reference curve written independently of the library: exp/log form instead
// of pow.
double reference_price(double lower, double upper, double fraction) {
  return lower / 6.0 * std::exp(fraction * std::log(6.0 * upper / lower));
}

const CesConfig kCes{5.0, 4.0, 3.0};

TEST(PricingTest, BoundaryIdentities) {
  const std::vector<ValuationBounds> cases = {
      ValuationBounds::uniform(1.0, 10.0),
      {0.25, 7.0, 2.0, 40.0, 0.5, 10.0},
      {3.0, 3.0, 1.0, 1.0, 2.0, 2.0},
  };
  for (const ValuationBounds& b : cases) {
    EXPECT_NEAR(price_energy(0.0, b, kCes), b.l_e / 6.0, 1e-12 * b.l_e);
    EXPECT_NEAR(price_energy(kCes.energy_cap, b, kCes), b.u_e, 1e-12 * b.u_e);
    EXPECT_NEAR(price_charge(0.0, b, kCes), b.l_c / 6.0, 1e-12 * b.l_c);
    EXPECT_NEAR(price_charge(kCes.charge_cap, b, kCes), b.u_c, 1e-12 * b.u_c);
    EXPECT_NEAR(price_discharge(0.0, b, kCes), b.l_d / 6.0, 1e-12 * b.l_d);
    EXPECT_NEAR(price_discharge(-kCes.discharge_cap, b, kCes), b.u_d, 1e-12 * b.u_d);
  }
}

TEST(PricingTest, MidpointMatchesSquareRoot) {
  const ValuationBounds b = ValuationBounds::uniform(1.0, 10.0);
  // (1/6) * sqrt(60)
  EXPECT_NEAR(price_energy(2.5, b, kCes), 1.2909944487358056, 1e-14);
}

TEST(PricingTest, ExtendedPowerDomain) {
  const ValuationBounds b = ValuationBounds::uniform(1.0, 10.0);
  const CesConfig ces{5.0, 5.0, 5.0};
  // Charging price while the slot is net discharging drops below L/6.
  EXPECT_NEAR(price_charge(-5.0, b, ces), 1.0 / 360.0, 1e-15);
  EXPECT_NEAR(price_discharge(5.0, b, ces), 1.0 / 360.0, 1e-15);
}

TEST(PricingTest, MatchesReferenceAndIsMonotone) {
  const ValuationBounds b{0.5, 8.0, 1.5, 9.0, 0.75, 4.5};
  double prev_e = 0.0, prev_c = 0.0, prev_d = 1e300;
  for (int i = 0; i <= 100; ++i) {
    const double y_e = kCes.energy_cap * i / 100.0;
    const double y_c = -kCes.discharge_cap + (kCes.charge_cap + kCes.discharge_cap) * i / 100.0;
    const double pe = price_energy(y_e, b, kCes);
    const double pc = price_charge(y_c, b, kCes);
    const double pd = price_discharge(y_c, b, kCes);
    EXPECT_NEAR(pe, reference_price(b.l_e, b.u_e, y_e / kCes.energy_cap), 1e-12 * pe);
    EXPECT_NEAR(pc, reference_price(b.l_c, b.u_c, y_c / kCes.charge_cap), 1e-12 * pc);
    EXPECT_NEAR(pd, reference_price(b.l_d, b.u_d, -y_c / kCes.discharge_cap), 1e-12 * pd);
    EXPECT_GT(pe, prev_e);
    EXPECT_GT(pc, prev_c);
    EXPECT_LT(pd, prev_d);
    prev_e = pe;
    prev_c = pc;
    prev_d = pd;
  }
}

TEST(PricingTest, OutsideDomainThrows) {
  const ValuationBounds b = ValuationBounds::uniform(1.0, 10.0);
  EXPECT_THROW(price_energy(-1e-9, b, kCes), DomainError);
  EXPECT_THROW(price_energy(5.0 + 1e-9, b, kCes), DomainError);
  EXPECT_THROW(price_charge(4.0 + 1e-9, b, kCes), DomainError);
  EXPECT_THROW(price_discharge(-3.0 - 1e-9, b, kCes), DomainError);
  EXPECT_THROW(price_energy(std::nan(""), b, kCes), DomainError);
}

TEST(PricingTest, BoundsValidation) {
  EXPECT_NO_THROW(ValuationBounds::uniform(1.0, 10.0).validate());
  EXPECT_THROW((ValuationBounds{2.0, 1.0, 1.0, 2.0, 1.0, 2.0}.validate()), ConfigError);
  EXPECT_THROW((ValuationBounds{0.0, 1.0, 1.0, 2.0, 1.0, 2.0}.validate()), ConfigError);
  // Charge ratio 2, discharge ratio 3.
  EXPECT_THROW((ValuationBounds{1.0, 5.0, 1.0, 2.0, 1.0, 3.0}.validate()), ConfigError);
  EXPECT_NO_THROW((ValuationBounds{1.0, 5.0, 2.0, 6.0, 0.5, 1.5}.validate()));
}

TEST(PricingTest, CompetitiveRatio) {
  const CompetitiveRatio r = competitive_ratio(ValuationBounds::uniform(1.0, 10.0));
  EXPECT_NEAR(r.alpha, 8.18868912444, 1e-10);  // 2 ln 60
  EXPECT_DOUBLE_EQ(r.alpha_e, r.alpha_cd);

  const CompetitiveRatio mixed = competitive_ratio({1.0, 10.0, 2.0, 2.0, 3.0, 3.0});
  EXPECT_NEAR(mixed.alpha_cd, 3.58351893846, 1e-10);  // 2 ln 6
  EXPECT_DOUBLE_EQ(mixed.alpha, mixed.alpha_e);
  EXPECT_NEAR(increment_alpha(ValuationBounds::uniform(1.0, 10.0)), std::log(60.0), 1e-14);
}

ScheduleOption shared_option(double valuation) {
  const TimeGrid grid{4, 1.0};
  return make_option(grid, 0, 3, ChargeProfile::dense({1.0, 0.0, -1.0, 0.0}), valuation);
}

TEST(PricingTest, EstimateBoundsSingleOption) {
  const TimeGrid grid{4, 1.0};
  const std::vector<Request> requests = {{1, 1, {shared_option(3.0)}}};
  const ValuationBounds b = estimate_bounds(requests, grid);
  // Capacity [1, 1, 1, 0]: L_e = 3 / (3 * 3), U_e = 3 / 1.
  EXPECT_DOUBLE_EQ(b.l_e, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.u_e, 3.0);
  EXPECT_DOUBLE_EQ(b.l_c, 1.0);
  EXPECT_DOUBLE_EQ(b.u_c, 3.0);
  EXPECT_DOUBLE_EQ(b.l_d, 1.0);
  EXPECT_DOUBLE_EQ(b.u_d, 3.0);
  EXPECT_NO_THROW(b.validate());
}

TEST(PricingTest, EstimateBoundsEqualizesRatiosByRaisingUpper) {
  const TimeGrid grid{4, 1.0};
  // Charges 2 kW for one slot, discharges 1 kW over two.
  const ScheduleOption o =
      make_option(grid, 0, 3, ChargeProfile::dense({2.0, -1.0, -1.0, 0.0}), 6.0);
  const std::vector<Request> requests = {{1, 1, {o}}};
  const ValuationBounds b = estimate_bounds(requests, grid);
  // Charge: L = 6/6 = 1, U = 6/2 = 3. Discharge: L = 6/6 = 1, U = 6/1 = 6.
  EXPECT_DOUBLE_EQ(b.l_c, 1.0);
  EXPECT_DOUBLE_EQ(b.u_c, 6.0);
  EXPECT_DOUBLE_EQ(b.u_d, 6.0);
  EXPECT_NO_THROW(b.validate());
}

TEST(PricingTest, EstimateBoundsNeedsCapacity) {
  const TimeGrid grid{4, 1.0};
  EXPECT_THROW(estimate_bounds({}, grid), CannotEstimateError);
  const std::vector<Request> zero_value = {{1, 1, {shared_option(0.0)}}};
  EXPECT_THROW(estimate_bounds(zero_value, grid), CannotEstimateError);
}

TEST(PricingTest, OptionWithinBounds) {
  const ValuationBounds b = ValuationBounds::uniform(1.0, 10.0);
  EXPECT_TRUE(option_within_bounds(shared_option(1.0), b));
  EXPECT_TRUE(option_within_bounds(shared_option(10.0), b));
  EXPECT_FALSE(option_within_bounds(shared_option(0.5), b));
  EXPECT_FALSE(option_within_bounds(shared_option(10.5), b));
}

}  // namespace
}  // namespace ces
