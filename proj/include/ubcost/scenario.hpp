#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ubcost/costs.hpp"
#include "ubcost/deciles.hpp"
#include "ubcost/demand.hpp"
#include "ubcost/dimensioning.hpp"
#include "ubcost/ingest.hpp"
#include "ubcost/radio.hpp"

namespace ubcost {

/// Policy knobs of one run. Optional fields fall back to the country's own
/// value from the countries table.
struct Scenario {
  std::string name = "baseline";
  // Indexed by IncomeGroup; when present every group has a value.
  std::optional<std::array<double, 3>> monthly_gb;
  std::optional<double> reliability_pct;
  std::optional<double> adoption_rate_pct;
  double busy_hour_share_pct = 15.0;
  int days_per_month = 30;
  std::optional<int> end_year;
  std::filesystem::path lookup_config;  // sim config; empty = defaults
  GrowthMode growth_mode = GrowthMode::compound;
  FiberDistanceMode fiber_distance_mode = FiberDistanceMode::site_density;

  void validate() const;  // throws DomainError
  double monthly_gb_for(const CountryParams& c) const;
  double reliability_for(const CountryParams& c) const;
  /// Country parameters with the scenario's overrides applied.
  CountryParams apply(const CountryParams& c) const;
  std::string canonical() const;
  std::string hash() const;
};

/// The 50/50/40 GB (AE/EME/LIDC) at 95% reliability reference scenario.
Scenario baseline_scenario();

Scenario parse_scenario(std::string_view yaml_text, std::string_view source = "scenario");
/// Relative lookup_config paths resolve against the scenario file's folder.
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_keys_help();

struct DecileDetail {
  Decile decile;
  DecileAssets assets;
  DemandResult demand;
  DecilePlan plan;
  DecileCostResult cost;
  double terrestrial_cost_per_user = 0.0;
  double satellite_cost_per_user = 0.0;
  Cents attributed_total_cost;  // this decile's share of the country TC
};

struct CountryResult {
  std::string country_iso3;
  IncomeGroup income_group = IncomeGroup::LIDC;
  Region region = Region::SSA;
  CountryRollup rollup;
  std::vector<DecileDetail> deciles;
  std::vector<std::string> notes;
};

/// deciles → demand → dimensioning → costs for one country. `book` already
/// carries the country's wages. Errors are rethrown with the country code.
CountryResult run_country(const CountryParams& country, std::span<const AreaRecord> areas,
                          const CostBook& book, const Scenario& scenario,
                          const LookupSet& lookups);

/// Splits `total` across weights by largest remainder; ties go to the
/// lower index. The parts sum to `total` exactly.
std::vector<Cents> apportion(Cents total, std::span<const Cents> weights);

struct AggregateRow {
  std::string level;  // global, income_group, region, income_group_decile, region_decile
  std::string key;
  int decile = 0;     // 0 when not a decile row
  Cents total_cost;
  double gdp_usd = 0.0;
  double unconnected_users = 0.0;
  int countries = 0;

  double gdp_share_pct() const;
};

struct AggregateReport {
  std::string scenario_name;
  std::vector<CountryResult> countries;  // sorted by country code
  std::vector<AggregateRow> rows;
  Cents global_total;

  const AggregateRow* find(std::string_view level, std::string_view key, int decile = 0) const;
};

/// Folds country results in sorted order into group/region/decile tables.
AggregateReport aggregate(std::string scenario_name, std::vector<CountryResult> countries);

/// The (frequency, reliability) tables a scenario needs for a dataset.
std::vector<std::pair<double, double>> required_lookups(const Dataset& ds,
                                                        const Scenario& scenario);

/// Runs every country (in parallel up to `jobs`) and aggregates. Any
/// country failure aborts with that country named.
AggregateReport run_global(const Dataset& ds, const Scenario& scenario, const LookupSet& lookups,
                           unsigned jobs = 1);

struct SweepRow {
  std::string scenario;
  std::string level;
  std::string key;
  Cents total_cost;
  Cents delta_vs_baseline;
  double delta_pct = 0.0;
};

struct SweepTable {
  std::string baseline;
  std::vector<AggregateReport> reports;
  std::vector<SweepRow> rows;
};

/// Compares group, region and global totals of each report with the
/// report named `baseline_name`. Needs at least two uniquely named reports.
SweepTable compare(std::vector<AggregateReport> reports, std::string_view baseline_name);

/// Runs each scenario and compares group, region and global totals with
/// the baseline scenario. Needs at least two uniquely named scenarios.
SweepTable sweep(const Dataset& ds, std::span<const Scenario> scenarios,
                 std::string_view baseline_name, const LookupSet& lookups, unsigned jobs = 1);

// Result files. Each writer emits a header row and deterministic bytes.
void write_country_results(std::ostream& os, const AggregateReport& report);
void write_decile_results(std::ostream& os, const AggregateReport& report);
void write_aggregate_results(std::ostream& os, const AggregateReport& report);
void write_sweep(std::ostream& os, const SweepTable& table);
/// Diagnostic per-decile population and asset table.
void write_deciles_diagnostic(std::ostream& os, const AggregateReport& report);

}  // namespace ubcost
