#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "ubcost/types.hpp"

using namespace ubcost;

TEST_CASE("cents round half away from zero") {
  CHECK(Cents::from_usd(1.005).value() == 100);  // 1.005 is below the half in binary
  CHECK(Cents::from_usd(0.125).value() == 13);
  CHECK(Cents::from_usd(-0.125).value() == -13);
  CHECK(Cents::from_usd(51600.0).value() == 5160000);
  CHECK(Cents::from_usd(0.0).value() == 0);
}

TEST_CASE("cents arithmetic is exact") {
  Cents a(12345), b(-45);
  CHECK((a + b).value() == 12300);
  CHECK((a - b).value() == 12390);
  a += Cents(5);
  CHECK(a.value() == 12350);
  CHECK(Cents(1) < Cents(2));
  CHECK(Cents(7).usd() == doctest::Approx(0.07));
}

TEST_CASE("format_usd") {
  CHECK(format_usd(Cents(0)) == "0.00");
  CHECK(format_usd(Cents(5)) == "0.05");
  CHECK(format_usd(Cents(-1205)) == "-12.05");
  CHECK(format_usd(Cents(500000)) == "5000.00");
}

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(10.0) == "10");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e12, 1e12);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / 3.0;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("enum names parse back") {
  for (auto g : kIncomeGroups) CHECK(parse_income_group(to_string(g)) == g);
  for (auto r : kRegions) CHECK(parse_region(to_string(r)) == r);
  for (auto s : {Sector::ICT, Sector::Logistics, Sector::Construction})
    CHECK(parse_sector(to_string(s)) == s);
  CHECK(to_string(Region::AE_region) == "AE-region");
  CHECK_FALSE(parse_income_group("LIC"));
  CHECK_FALSE(parse_region("Europe"));
}
