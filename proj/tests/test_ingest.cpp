#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "ubcost/costs.hpp"
#include "ubcost/ingest.hpp"

using namespace ubcost;
using ubcost::testing::fixture;
using ubcost::testing::TempDir;

namespace {

const char* kCountriesHeader =
    "country_iso3,income_group,region,pop_growth_rate_pct_per_year,start_year,end_year,"
    "adoption_rate_pct,market_share_pct,active_share_pct,total_sites,coverage_2g_pct,"
    "coverage_4g_pct,fiber_backhaul_share_pct,spectrum_portfolio,unconnected_users,gdp_usd,"
    "monthly_data_target_gb,reliability_pct\n";

}  // namespace

TEST_CASE("valid fixture passes with no violations") {
  const auto report = validate_inputs(InputPaths::in_directory(fixture("two_country")));
  CHECK(report.violations.empty());
  REQUIRE(report.dataset);
  CHECK(report.dataset->countries.size() == 2);
  CHECK(report.dataset->areas.size() == 20);
  CHECK(report.dataset->wages.size() == 6);
  CHECK(report.dataset->portfolio_frequencies() == std::vector<double>{700, 800, 1800, 2600});
}

TEST_CASE("blank fiber share takes the regional default and is noted") {
  const auto report = validate_inputs(InputPaths::in_directory(fixture("two_country")));
  REQUIRE(report.dataset);
  const auto* ken = report.dataset->find_country("KEN");
  REQUIRE(ken);
  CHECK(ken->fiber_share_defaulted);
  CHECK(ken->fiber_backhaul_share_pct == default_fiber_share_pct(Region::SSA));
  CHECK(report.notes.size() == 1);
  const auto* per = report.dataset->find_country("PER");
  CHECK_FALSE(per->fiber_share_defaulted);
  CHECK(per->fiber_backhaul_share_pct == 25.0);
}

TEST_CASE("one bad row yields one violation naming the row and field") {
  std::vector<Violation> v;
  const auto areas = parse_areas(
      "area_id,country_iso3,population,area_km2\nA1,KEN,100,10\nA2,KEN,-5,10\nA3,KEN,1,2\n",
      "areas.csv", v);
  REQUIRE(v.size() == 1);
  CHECK(v[0].line == 3);
  CHECK(v[0].field == "population");
  CHECK(v[0].describe().find("areas.csv:3: population") == 0);
  CHECK(areas.size() == 2);
}

TEST_CASE("area violations are all collected") {
  std::vector<Violation> v;
  parse_areas(
      "area_id,country_iso3,population,area_km2\n"
      "A1,KEN,abc,10\n"    // not a number
      "A2,ken,1,10\n"      // lower-case code
      "A3,KEN,1,0\n"       // zero area
      "A1,KEN,1,1\n"       // duplicate id
      "A5,KEN,1\n",        // short row
      "areas.csv", v);
  CHECK(v.size() == 5);
}

TEST_CASE("header problems are reported") {
  std::vector<Violation> v;
  parse_areas("area_id,country_iso3,population\nA1,KEN,1\n", "areas.csv", v);
  CHECK_FALSE(v.empty());
  v.clear();
  parse_areas("area_id,country_iso3,population,area_km2,extra\nA1,KEN,1,1,2\n", "areas.csv", v);
  CHECK_FALSE(v.empty());
  v.clear();
  parse_areas("", "areas.csv", v);
  CHECK(v.size() == 1);
}

TEST_CASE("country rows are range checked") {
  std::vector<Violation> v;
  const std::string text = std::string(kCountriesHeader) +
                           "KEN,LIDC,SSA,2,2020,2030,60,40,2,400,85,55,,800:10,1,1e9,40,95\n"
                           "UGA,LOW,SSA,2,2020,2030,60,40,2,400,85,55,,800:10,1,1e9,40,95\n"
                           "TZA,LIDC,SSA,2,2020,2030,160,40,2,400,85,55,,800:10,1,1e9,40,95\n"
                           "RWA,LIDC,SSA,2,2020,2030,60,40,2,400,85,55,,800-10,1,1e9,40,95\n"
                           "BDI,LIDC,SSA,2,2030,2020,60,40,2,400,85,55,,800:10,1,1e9,40,95\n";
  const auto countries = parse_countries(text, "countries.csv", v);
  CHECK(countries.size() == 1);
  CHECK(v.size() == 4);
  for (const auto& x : v) CHECK(x.line >= 3);
}

TEST_CASE("cross references are checked") {
  TempDir dir;
  testing::copy_tree(fixture("two_country"), dir.path());
  // Unconnected users above the area population.
  auto text = testing::slurp(dir / "countries.csv");
  text.replace(text.find(",120000,"), 8, ",9e12,");
  testing::spit(dir / "countries.csv", text);
  auto report = validate_inputs(InputPaths::in_directory(dir.path()));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].field == "unconnected_users");

  // An area pointing at an unknown country.
  testing::copy_tree(fixture("two_country"), dir.path());
  std::ofstream(dir / "areas.csv", std::ios::app) << "X1,ZZZ,5,5\n";
  report = validate_inputs(InputPaths::in_directory(dir.path()));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].message.find("ZZZ") != std::string::npos);
  CHECK_FALSE(report.dataset);
}

TEST_CASE("fewer than ten areas is a violation") {
  TempDir dir;
  testing::copy_tree(fixture("two_country"), dir.path());
  std::string kept;
  std::istringstream in(testing::slurp(dir / "areas.csv"));
  for (std::string line; std::getline(in, line);)
    if (line.rfind("K10,", 0) != 0) kept += line + "\n";
  testing::spit(dir / "areas.csv", kept);
  const auto report = validate_inputs(InputPaths::in_directory(dir.path()));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].message.find("KEN has 9 areas") != std::string::npos);
}

TEST_CASE("missing file is an I/O error") {
  TempDir dir;
  CHECK_THROWS_AS(validate_inputs(InputPaths::in_directory(dir.path())), IoError);
}

TEST_CASE("load_inputs throws every violation") {
  TempDir dir;
  testing::copy_tree(fixture("two_country"), dir.path());
  std::ofstream(dir / "wages.csv", std::ios::app) << "KEN,ICT,-1,1800\nKEN,plumbing,1,1\n";
  try {
    load_inputs(InputPaths::in_directory(dir.path()));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() == 3);  // bad wage, duplicate row, bad sector
  }
}

TEST_CASE("portfolio encoding") {
  const auto p = decode_portfolio("800:10|1800:20.5");
  REQUIRE(p);
  CHECK(p->size() == 2);
  CHECK((*p)[1].frequency_mhz == 1800);
  CHECK((*p)[1].bandwidth_mhz == 20.5);
  CHECK(encode_portfolio(*p) == "800:10|1800:20.5");
  CHECK_FALSE(decode_portfolio(""));
  CHECK_FALSE(decode_portfolio("800"));
  CHECK_FALSE(decode_portfolio("800:x"));
}

TEST_CASE("portfolio values are checked per row") {
  std::vector<Violation> v;
  parse_countries(std::string(kCountriesHeader) +
                      "KEN,LIDC,SSA,2,2020,2030,60,40,2,400,85,55,,800:-1,1,1e9,40,95\n"
                      "UGA,LIDC,SSA,2,2020,2030,60,40,2,400,85,55,,800:10|800:5,1,1e9,40,95\n",
                  "countries.csv", v);
  REQUIRE(v.size() == 2);
  CHECK(v[0].field == "spectrum_portfolio");
  CHECK(v[1].message.find("twice") != std::string::npos);
}

TEST_CASE("dataset round trip through files") {
  const auto ds = load_inputs(InputPaths::in_directory(fixture("two_country")));
  TempDir dir;
  write_dataset(dir.path(), ds);
  const auto again = load_inputs(InputPaths::in_directory(dir.path()));
  CHECK(again == ds);
  // Second write is byte-identical.
  TempDir dir2;
  write_dataset(dir2.path(), again);
  for (auto name : {"areas.csv", "countries.csv", "wages.csv", "costbook.yaml"})
    CHECK(testing::slurp(dir / name) == testing::slurp(dir2 / name));
}

TEST_CASE("cost book per country takes wage rows") {
  const auto ds = load_inputs(InputPaths::in_directory(fixture("two_country")));
  const auto ken = cost_book_for_country(ds.cost_book, ds.wages, "KEN");
  CHECK(ken.wage_ict_usd_hr == 4.0);
  CHECK(ken.wage_logistics_usd_hr == 2.5);
  CHECK(ken.wage_construction_usd_hr == 2.0);
  const auto other = cost_book_for_country(ds.cost_book, ds.wages, "XXX");
  CHECK(other.wage_construction_usd_hr == 3.0);  // cost book fallback
  CHECK(other.wage_ict_usd_hr == 0.0);
}

namespace {

// Synthetic wages: ln w = a + b ln g (+ noise), every fourth row missing.
std::vector<WageRow> synthetic_wages(double noise_sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sd);
  std::uniform_real_distribution<double> lng(std::log(300.0), std::log(80000.0));
  const struct {
    Sector s;
    double a, b;
  } sectors[] = {{Sector::ICT, -3.0, 0.6}, {Sector::Logistics, -3.5, 0.55},
                 {Sector::Construction, -4.0, 0.62}};
  std::vector<WageRow> rows;
  for (int c = 0; c < 40; ++c) {
    const std::string iso = std::string("C") + char('A' + c / 26) + char('A' + c % 26);
    const double g = std::exp(lng(rng));
    for (const auto& s : sectors) {
      WageRow w;
      w.country_iso3 = iso;
      w.sector = s.s;
      w.gdp_per_capita_usd = g;
      if (c % 4 != 3) w.hourly_wage_usd = std::exp(s.a + s.b * std::log(g) + noise(rng));
      rows.push_back(w);
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("wage imputation recovers exact log-linear data") {
  const auto rows = synthetic_wages(0.0, 1);
  const auto result = impute_wages(rows);
  REQUIRE(result.fits.size() == 3);
  for (const auto& f : result.fits) {
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.observed == 30);
    CHECK(f.imputed == 10);
  }
  CHECK(result.fits_at_least(0.9));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& w = result.rows[i];
    REQUIRE(w.hourly_wage_usd);
    const double a = w.sector == Sector::ICT ? -3.0 : w.sector == Sector::Logistics ? -3.5 : -4.0;
    const double b = w.sector == Sector::ICT ? 0.6 : w.sector == Sector::Logistics ? 0.55 : 0.62;
    const double truth = std::exp(a + b * std::log(w.gdp_per_capita_usd));
    CHECK(std::abs(*w.hourly_wage_usd - truth) / truth < 1e-9);
    CHECK(w.imputed == !rows[i].hourly_wage_usd);
    if (rows[i].hourly_wage_usd) CHECK(*w.hourly_wage_usd == *rows[i].hourly_wage_usd);
  }
}

TEST_CASE("wage imputation on noisy data clears the 0.9 fit threshold") {
  const auto result = impute_wages(synthetic_wages(0.15, 2));
  for (const auto& f : result.fits) CHECK(f.r_squared >= 0.9);
  CHECK(result.fits_at_least(0.9));
  // Heavy noise drops below it.
  CHECK_FALSE(impute_wages(synthetic_wages(2.0, 3)).fits_at_least(0.9));
}

TEST_CASE("wage imputation needs two observations per sector") {
  std::vector<WageRow> rows{{"AAA", Sector::ICT, 5.0, 1000.0, false},
                            {"BBB", Sector::ICT, std::nullopt, 2000.0, false}};
  CHECK_THROWS_WITH_AS(impute_wages(rows), doctest::Contains("ICT"), DomainError);
  rows.push_back({"CCC", Sector::ICT, 6.0, 1000.0, false});
  CHECK_THROWS_WITH_AS(impute_wages(rows), doctest::Contains("variation"), DomainError);
  rows.back().gdp_per_capita_usd = 3000.0;
  CHECK_NOTHROW(impute_wages(rows));
}
