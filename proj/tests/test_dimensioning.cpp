#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ubcost/dimensioning.hpp"

using namespace ubcost;

namespace {

// 1 MHz of 800 MHz spectrum over a linear curve: capacity = 10 × density.
const std::vector<SpectrumBand> kBand{{800.0, 1.0}};

std::vector<CapacityLookup> linear_curve() {
  CapacityLookup t;
  t.frequency_mhz = 800;
  t.reliability_pct = 95;
  t.rows = {{0, 0, 0, false}, {1, 10, 0, false}, {10, 100, 0, false}, {100, 1000, 0, false}};
  return {t};
}

Decile unit_decile() {
  Decile d;
  d.country_iso3 = "AAA";
  d.index = 3;
  d.population = 100;
  d.area_km2 = 1.0;
  return d;
}

DecileAssets assets(long long g4, long long g2) { return {3, g4, g2, 0}; }

}  // namespace

TEST_CASE("required density inverts the curve") {
  const auto lk = linear_curve();
  auto r = required_density(0.0, kBand, lk);
  CHECK(r.meetable);
  CHECK(r.density == 0.0);
  r = required_density(100.0, kBand, lk);  // exactly a grid point
  CHECK(r.density == doctest::Approx(10.0).epsilon(1e-9));
  r = required_density(55.0, kBand, lk);
  CHECK(r.density == doctest::Approx(5.5).epsilon(1e-9));
  CHECK(r.max_capacity == 1000.0);
  r = required_density(1000.5, kBand, lk);
  CHECK_FALSE(r.meetable);
  // Monotone in demand.
  double prev = 0.0;
  std::mt19937_64 rng(5);
  std::vector<double> demands;
  for (int i = 0; i < 200; ++i) demands.push_back(std::uniform_real_distribution<double>(0, 999)(rng));
  std::sort(demands.begin(), demands.end());
  for (double d : demands) {
    const double x = required_density(d, kBand, lk).density;
    CHECK(x >= prev);
    prev = x;
  }
}

TEST_CASE("flat stretches pick the smallest density") {
  CapacityLookup t;
  t.frequency_mhz = 800;
  t.reliability_pct = 95;
  t.rows = {{0, 0, 0, false}, {1, 10, 0, false}, {2, 10, 0, false}, {3, 30, 0, false}};
  const std::vector<CapacityLookup> lk{t};
  CHECK(required_density(10.0, kBand, lk).density == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("site counts round up with a tolerance") {
  CHECK(sites_for_density(10.0, 1.0) == 10);
  CHECK(sites_for_density(10.0000000001, 1.0) == 10);
  CHECK(sites_for_density(10.01, 1.0) == 11);
  CHECK(sites_for_density(0.0, 50.0) == 0);
  CHECK(sites_for_density(0.001, 50.0) == 1);
}

TEST_CASE("new builds after existing 4G") {
  const auto lk = linear_curve();
  const auto p = plan_decile(unit_decile(), assets(4, 0), 100.0, kBand, lk);
  CHECK(p.required_total_sites == 10);
  CHECK(p.new_builds == 6);
  CHECK(p.upgrades == 0);
  CHECK(p.strategy == Strategy::terrestrial);
  CHECK(p.decile_index == 3);
}

TEST_CASE("enough existing sites needs nothing") {
  const auto lk = linear_curve();
  const auto p = plan_decile(unit_decile(), assets(9, 3), 50.0, kBand, lk);
  CHECK(p.required_total_sites == 5);
  CHECK(p.new_builds == 0);
  CHECK(p.upgrades == 0);
  CHECK(p.strategy == Strategy::none_needed);
}

TEST_CASE("non-4G sites are upgraded before building") {
  const auto lk = linear_curve();
  const auto p = plan_decile(unit_decile(), assets(4, 2), 100.0, kBand, lk);
  CHECK(p.upgrades == 2);
  CHECK(p.new_builds == 4);
  CHECK(p.new_sites() == 6);
  const auto q = plan_decile(unit_decile(), assets(4, 20), 100.0, kBand, lk);
  CHECK(q.upgrades == 6);
  CHECK(q.new_builds == 0);
}

TEST_CASE("demand above the curve is flagged for satellite") {
  const auto lk = linear_curve();
  const auto p = plan_decile(unit_decile(), assets(4, 2), 5000.0, kBand, lk);
  CHECK(p.unmeetable);
  CHECK(p.strategy == Strategy::satellite);
  CHECK(p.new_sites() == 0);
}

TEST_CASE("zero demand in a decile without sites needs nothing") {
  const auto p = plan_decile(unit_decile(), assets(0, 0), 0.0, kBand, linear_curve());
  CHECK(p.strategy == Strategy::none_needed);
  CHECK(p.required_total_sites == 0);
}

TEST_CASE("satellite only when strictly cheaper") {
  CHECK(choose_satellite(900, 1000) == Strategy::terrestrial);
  CHECK(choose_satellite(1400, 1000) == Strategy::satellite);
  CHECK(choose_satellite(1000, 1000) == Strategy::terrestrial);
  DecilePlan p;
  p.new_builds = 3;
  p.upgrades = 1;
  const auto s = with_satellite(p, 120.0);
  CHECK(s.strategy == Strategy::satellite);
  CHECK(s.new_sites() == 0);
  CHECK(s.satellite_users == 120.0);
  CHECK(to_string(Strategy::none_needed) == "none_needed");
}

TEST_CASE("two bands share the load") {
  CapacityLookup a = linear_curve().front();
  CapacityLookup b = a;
  b.frequency_mhz = 1800;
  const std::vector<CapacityLookup> lk{a, b};
  const std::vector<SpectrumBand> both{{800, 1}, {1800, 3}};
  // Capacity is 10·d + 30·d = 40·d.
  CHECK(required_density(80.0, both, lk).density == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("plan invariants over random inputs") {
  const auto lk = linear_curve();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> demand(0.0, 1100.0), area(0.01, 50.0);
  std::uniform_int_distribution<long long> sites(0, 400);
  for (int i = 0; i < 2000; ++i) {
    Decile d = unit_decile();
    d.area_km2 = area(rng);
    const double dem = demand(rng);
    const auto a = assets(sites(rng), sites(rng));
    const auto p = plan_decile(d, a, dem, kBand, lk);
    if (p.unmeetable) {
      CHECK(p.strategy == Strategy::satellite);
      CHECK(p.new_sites() == 0);
      continue;
    }
    CHECK(p.new_builds >= 0);
    CHECK(p.upgrades >= 0);
    CHECK(p.upgrades <= a.existing_non4g_sites);
    CHECK(p.new_sites() == std::max(0LL, p.required_total_sites - a.existing_4g_sites));
    if (p.strategy == Strategy::none_needed) CHECK(p.new_sites() == 0);
    // More existing 4G never means more work.
    auto more = a;
    more.existing_4g_sites += sites(rng);
    CHECK(plan_decile(d, more, dem, kBand, lk).new_sites() <= p.new_sites());
  }
}
