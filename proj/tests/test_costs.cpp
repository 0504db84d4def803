#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ubcost/costs.hpp"
#include "ubcost/dimensioning.hpp"

using namespace ubcost;

namespace {

CostBook flat_book() {
  CostBook b;
  b.ran_usd = 20000;
  b.backhaul_wireless_usd = 10000;
  b.backhaul_fiber_per_m_usd = 10;
  b.civils_usd = 15000;
  b.power_system_usd = 5000;
  b.labor_hours_per_component = 16;
  b.wage_ict_usd_hr = b.wage_logistics_usd_hr = b.wage_construction_usd_hr = 25;
  b.fiber_cost_per_m_usd = 10;
  return b;
}

}  // namespace

TEST_CASE("wireless greenfield site costs 51,600") {
  const auto s = site_capex(flat_book(), BackhaulType::wireless, true);
  CHECK(s.total() == Cents::from_usd(51600));
  CHECK(s.hardware() == Cents::from_usd(50000));
  CHECK(s.labor() == Cents::from_usd(1600));
}

TEST_CASE("zero book costs nothing") {
  const CostBook zero;
  CHECK(site_capex(zero, BackhaulType::fiber, true, 3.0).total().value() == 0);
  CHECK(site_capex(zero, BackhaulType::wireless, false).total().value() == 0);
}

TEST_CASE("greenfield minus upgrade is civils plus construction labor") {
  auto b = flat_book();
  b.civils_usd = 10000;
  for (auto bh : {BackhaulType::wireless, BackhaulType::fiber}) {
    const auto g = site_capex(b, bh, true, 0.7);
    const auto u = site_capex(b, bh, false, 0.7);
    CHECK((g.total() - u.total()) == Cents::from_usd(10000 + 16 * 25));
  }
}

TEST_CASE("fiber backhaul is priced per metre") {
  const auto s = site_capex(flat_book(), BackhaulType::fiber, true, 0.25);
  CHECK(s.backhaul == Cents::from_usd(2500));
}

TEST_CASE("metro fiber") {
  CHECK(mean_intersite_distance_km(100, 25) == doctest::Approx(1.0));
  CHECK(metro_core_fiber(100, 25, 5, 10, 10) == Cents::from_usd(5000));
  CHECK(metro_core_fiber(100, 25, 0, 10, 10).value() == 0);
  CHECK(metro_core_fiber(400, 25, 5, 10, 10) == Cents::from_usd(10000));
  CHECK(metro_core_fiber(100, 25, 5, 10, 10, FiberDistanceMode::literal) == Cents::from_usd(500));
  CHECK_THROWS_AS(metro_core_fiber(100, 0, 5, 10, 10), DomainError);
  CHECK_THROWS_AS(mean_intersite_distance_km(100, 0), DomainError);
}

TEST_CASE("opex to horizon") {
  CostBook b;
  b.opex_rate_pct_per_year = 15;
  CapexBreakdown site;
  site.ran = Cents::from_usd(80000);
  CHECK(opex_to_horizon(site, b, 8) == Cents::from_usd(96000));
  CHECK(opex_to_horizon(site, b, 0).value() == 0);
  b.opex_rate_pct_per_year = 0;
  CHECK(opex_to_horizon(site, b, 8).value() == 0);
  // Recurring labor counts, construction labor does not.
  site.labor_planning = Cents::from_usd(100);
  site.labor_construction = Cents::from_usd(1000);
  CHECK(opex_to_horizon(site, b, 2) == Cents::from_usd(200));
  CHECK_THROWS_AS(opex_to_horizon(site, b, -1), DomainError);
}

TEST_CASE("satellite pricing") {
  const CostBook b;
  CHECK(satellite_per_user_month(b, IncomeGroup::LIDC) == doctest::Approx(16.6667).epsilon(1e-5));
  CHECK(satellite_per_user_month(b, IncomeGroup::EME) == 25.0);
  CHECK(satellite_per_user_month(b, IncomeGroup::AE) == 50.0);
  CHECK(satellite_cost(0, IncomeGroup::LIDC, b, 10).value() == 0);
  CHECK(satellite_cost(12, IncomeGroup::LIDC, b, 10) == Cents::from_usd(24000));
  CHECK(satellite_cost(1, IncomeGroup::AE, b, 1) == Cents::from_usd(600));
  CHECK_THROWS_AS(satellite_cost(-1, IncomeGroup::AE, b, 1), DomainError);
}

TEST_CASE("decile pricing batches fiber and wireless sites") {
  auto b = flat_book();
  b.labor_hours_per_component = 0;
  b.opex_rate_pct_per_year = 0;
  b.fiber_core_split_alpha_pct = 0;
  b.policy_per_user_usd = 0;
  b.skills_per_user_usd = 0;
  DecilePlan plan;
  plan.required_total_sites = 25;
  plan.new_builds = 4;
  plan.upgrades = 2;
  DecileCostInputs in;
  in.area_km2 = 100;  // 1 km spacing, fiber backhaul $10,000
  in.fiber_fraction = 0.5;
  in.horizon_years = 10;
  const auto r = price_terrestrial(b, plan, in);
  // 2 fiber + 2 wireless greenfield, 1 fiber + 1 wireless upgrade.
  const double expect = 2 * (20000 + 10000 + 15000 + 5000) + 2 * (20000 + 10000 + 15000 + 5000) +
                        (20000 + 10000 + 5000) + (20000 + 10000 + 5000);
  CHECK(r.capex.total() == Cents::from_usd(expect));
  CHECK(r.total() == r.capex.total());
  in.fiber_fraction = 1.5;
  CHECK_THROWS_AS(price_terrestrial(b, plan, in), DomainError);
}

TEST_CASE("overheads apply to every strategy") {
  const CostBook b;
  DecilePlan none;
  DecileCostInputs in;
  in.served_users = 100;
  in.horizon_years = 10;
  const auto t = price_terrestrial(b, none, in);
  CHECK(t.total() == Cents::from_usd(1400));
  const auto s = price_satellite(b, in);
  CHECK(s.policy == Cents::from_usd(200));
  CHECK(s.skills == Cents::from_usd(1200));
  CHECK(s.satellite == Cents::from_usd(200.0 * 100 * 12 * 10 / 12));
}

TEST_CASE("tpu and total cost") {
  CHECK(tpu(Cents::from_usd(1e6), 1e4) == doctest::Approx(100.0));
  CHECK(tpu(Cents(0), 0.0) == 0.0);
  CHECK(tpu(Cents(0), 10.0) == 0.0);
  CHECK(tpu(Cents::from_usd(2e6), 1e4) == 2 * tpu(Cents::from_usd(1e6), 1e4));
  CHECK_THROWS_AS(tpu(Cents(1), 0.0), DomainError);
  CHECK(total_cost(100, 50000) == 5e6);
  CHECK(total_cost(100, 0) == 0.0);
  const double t = 123.456789;
  CHECK(total_cost(t, 98765) / 98765 == doctest::Approx(t).epsilon(1e-15));
  CHECK_THROWS_AS(total_cost(1, -1), DomainError);
}

TEST_CASE("roll up") {
  std::vector<DecileCostResult> d(2);
  d[0].policy = Cents::from_usd(100);
  d[1].satellite = Cents::from_usd(900);
  const auto r = roll_up(d, 10, 50, 1e6);
  CHECK(r.numerator == Cents::from_usd(1000));
  CHECK(r.tpu_usd == 100.0);
  CHECK(r.total_cost_usd == 5000.0);
  CHECK(r.total_cost_cents == Cents::from_usd(5000));
  CHECK(r.gdp_share_pct == doctest::Approx(0.5));
}

TEST_CASE("cost book parsing") {
  const char* yaml =
      "ran_usd: 20000\nbackhaul_wireless_usd: 10000\nbackhaul_fiber_per_m_usd: 10\n"
      "civils_usd: 15000\npower_system_usd: 5000\nfiber_cost_per_m_usd: 10\n";
  const auto b = parse_cost_book(yaml);
  CHECK(b.ran_usd == 20000);
  CHECK(b.policy_per_user_usd == 2);
  CHECK(b.skills_per_user_usd == 12);
  CHECK(b.satellite_monthly_usd == 200);
  CHECK(b.users_per_subscription(IncomeGroup::LIDC) == 12);
  CHECK_FALSE(b.horizon_years);

  auto full = b;
  full.wage_ict_usd_hr = 3.5;
  full.horizon_years = 8;
  full.satellite_users_per_subscription.eme = 6;
  CHECK(parse_cost_book(serialize_cost_book(full)) == full);

  CHECK_THROWS_WITH_AS(parse_cost_book("ran_usd: 1\n"), doctest::Contains("backhaul_wireless_usd"),
                       DomainError);
  CHECK_THROWS_WITH_AS(parse_cost_book(std::string(yaml) + "ran_usdd: 3\n"),
                       doctest::Contains("ran_usdd"), DomainError);
  CHECK_THROWS_AS(parse_cost_book(std::string(yaml) + "policy_per_user_usd: -1\n"), DomainError);
  CHECK_THROWS_AS(parse_cost_book(std::string(yaml) + "satellite_users_per_subscription: {LIDC: 0}\n"),
                  DomainError);
  CHECK_THROWS_AS(parse_cost_book("ran_usd: [1, 2]\n"), DomainError);
}
