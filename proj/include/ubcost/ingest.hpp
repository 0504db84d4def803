#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubcost/costs.hpp"
#include "ubcost/types.hpp"

namespace ubcost {

struct AreaRecord {
  std::string area_id;
  std::string country_iso3;
  double population = 0.0;  // persons
  double area_km2 = 0.0;

  double density() const { return population / area_km2; }
  bool operator==(const AreaRecord&) const = default;
};

struct CountryParams {
  std::string country_iso3;
  IncomeGroup income_group = IncomeGroup::LIDC;
  Region region = Region::SSA;
  double pop_growth_rate_pct_per_year = 0.0;
  int start_year = 2020;
  int end_year = 2030;
  double adoption_rate_pct = 0.0;
  double market_share_pct = 0.0;
  double active_share_pct = 0.0;
  long long total_sites = 0;
  double coverage_2g_pct = 0.0;
  double coverage_4g_pct = 0.0;
  double fiber_backhaul_share_pct = 0.0;
  // Set when the countries file left the share empty and the regional
  // default was substituted.
  bool fiber_share_defaulted = false;
  std::vector<SpectrumBand> spectrum_portfolio;
  double unconnected_users = 0.0;
  double gdp_usd = 0.0;
  double monthly_data_target_gb = 0.0;
  double reliability_pct = 95.0;

  int years() const { return end_year - start_year; }
  bool operator==(const CountryParams&) const = default;
};

struct WageRow {
  std::string country_iso3;
  Sector sector = Sector::ICT;
  std::optional<double> hourly_wage_usd;
  double gdp_per_capita_usd = 0.0;
  bool imputed = false;
  bool operator==(const WageRow&) const = default;
};

/// Fiber backhaul share used when a country row leaves it blank. Seeded
/// from regional operator-survey estimates.
double default_fiber_share_pct(Region r);

std::string encode_portfolio(std::span<const SpectrumBand> bands);
std::optional<std::vector<SpectrumBand>> decode_portfolio(std::string_view text);

struct Dataset {
  std::vector<AreaRecord> areas;
  std::vector<CountryParams> countries;
  std::vector<WageRow> wages;
  CostBook cost_book;

  const CountryParams* find_country(std::string_view iso3) const;
  /// Areas of one country in input order.
  std::vector<AreaRecord> areas_for(std::string_view iso3) const;
  double national_population(std::string_view iso3) const;
  /// Every distinct portfolio frequency, ascending.
  std::vector<double> portfolio_frequencies() const;

  bool operator==(const Dataset&) const = default;
};

struct Violation {
  std::string file;
  std::size_t line = 0;  // 1-based, header is line 1; 0 when not row-specific
  std::string field;
  std::string message;

  std::string describe() const;
};

class ValidationError : public DomainError {
 public:
  explicit ValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct InputPaths {
  std::filesystem::path areas;
  std::filesystem::path countries;
  std::filesystem::path wages;
  std::filesystem::path cost_book;

  /// Conventional layout: areas.csv, countries.csv, wages.csv, costbook.yaml.
  static InputPaths in_directory(const std::filesystem::path& dir);
};

struct ValidationReport {
  std::optional<Dataset> dataset;  // present iff violations is empty
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // non-fatal, e.g. regional defaults applied
};

/// Parses and validates every input, collecting all violations rather than
/// stopping at the first. Throws IoError when a file cannot be read.
ValidationReport validate_inputs(const InputPaths& paths);

/// As validate_inputs, but throws ValidationError on any violation.
Dataset load_inputs(const InputPaths& paths);

// Parsers over in-memory text; file names are only used for messages.
std::vector<AreaRecord> parse_areas(std::string_view text, std::string_view file,
                                    std::vector<Violation>& out);
std::vector<CountryParams> parse_countries(std::string_view text, std::string_view file,
                                           std::vector<Violation>& out,
                                           std::vector<std::string>* notes = nullptr);
std::vector<WageRow> parse_wages(std::string_view text, std::string_view file,
                                 std::vector<Violation>& out);

void write_areas_csv(std::ostream& os, std::span<const AreaRecord> areas);
void write_countries_csv(std::ostream& os, std::span<const CountryParams> countries);
void write_wages_csv(std::ostream& os, std::span<const WageRow> wages);
/// Writes all four input files in the in_directory layout.
void write_dataset(const std::filesystem::path& dir, const Dataset& ds);

struct SectorFit {
  Sector sector = Sector::ICT;
  double intercept = 0.0;  // ln-space
  double slope = 0.0;      // elasticity of wage w.r.t. GDP per capita
  double r_squared = 0.0;
  std::size_t observed = 0;
  std::size_t imputed = 0;

  double predict(double gdp_per_capita) const;
};

struct WageImputation {
  std::vector<WageRow> rows;  // same order as input, no missing wages
  std::vector<SectorFit> fits;

  /// True when every fitted sector reaches the R² threshold.
  bool fits_at_least(double r_squared) const;
};

/// Per sector, regresses ln(wage) on ln(GDP per capita) over the observed
/// rows and fills missing wages with exp(prediction). Observed rows are
/// returned unchanged.
WageImputation impute_wages(std::span<const WageRow> wages);

/// Base cost book with the country's ICT/logistics/construction wages
/// substituted where the wage table has them.
CostBook cost_book_for_country(const CostBook& base, std::span<const WageRow> wages,
                               std::string_view iso3);

}  // namespace ubcost
