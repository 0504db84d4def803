#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ubcost/types.hpp"

namespace ubcost {

struct DecilePlan;

enum class BackhaulType { wireless, fiber };

/// How the mean inter-site distance used for fiber runs is derived.
///   site_density: 0.5·sqrt(area/total_sites) km
///   literal:      0.5·sqrt(1/total_sites), read as km
enum class FiberDistanceMode { site_density, literal };

struct SatelliteSplit {
  int lidc = 12;
  int eme = 8;
  int ae = 4;
  bool operator==(const SatelliteSplit&) const = default;
};

/// Unit costs and pricing rules, 2020 US$.
struct CostBook {
  double ran_usd = 0.0;
  double backhaul_wireless_usd = 0.0;
  double backhaul_fiber_per_m_usd = 0.0;
  double civils_usd = 0.0;
  double power_system_usd = 0.0;
  double labor_hours_per_component = 16.0;
  double wage_ict_usd_hr = 0.0;
  double wage_logistics_usd_hr = 0.0;
  double wage_construction_usd_hr = 0.0;
  double opex_rate_pct_per_year = 15.0;
  double fiber_core_split_alpha_pct = 10.0;
  double fiber_cost_per_m_usd = 0.0;
  double policy_per_user_usd = 2.0;
  double skills_per_user_usd = 12.0;
  double satellite_monthly_usd = 200.0;
  SatelliteSplit satellite_users_per_subscription;
  // When unset the horizon is the country's end_year − start_year.
  std::optional<int> horizon_years;

  int users_per_subscription(IncomeGroup g) const;
  void validate() const;  // throws DomainError

  bool operator==(const CostBook&) const = default;
};

/// Parses the YAML cost book. Unknown keys and missing unit prices are errors.
CostBook parse_cost_book(std::string_view yaml_text, std::string_view source = "costbook");
CostBook load_cost_book(const std::filesystem::path& path);
std::string serialize_cost_book(const CostBook& book);
std::string cost_book_keys_help();

/// Per-site capex, or a sum of them.
struct CapexBreakdown {
  Cents ran;
  Cents backhaul;
  Cents civils;
  Cents power;
  Cents labor_planning;
  Cents labor_logistics;
  Cents labor_construction;
  Cents labor_installation;

  Cents hardware() const { return ran + backhaul + civils + power; }
  Cents labor() const {
    return labor_planning + labor_logistics + labor_construction + labor_installation;
  }
  Cents total() const { return hardware() + labor(); }
  CapexBreakdown times(long long count) const;
  CapexBreakdown& operator+=(const CapexBreakdown& o);
  bool operator==(const CapexBreakdown&) const = default;
};

/// Capex of one greenfield build (greenfield = true) or one upgrade of an
/// existing tower, which omits civils and construction labor. Fiber
/// backhaul is priced per meter over `fiber_distance_km`.
CapexBreakdown site_capex(const CostBook& book, BackhaulType backhaul, bool greenfield,
                          double fiber_distance_km = 0.0);

double mean_intersite_distance_km(double area_km2, long long total_sites,
                                  FiberDistanceMode mode = FiberDistanceMode::site_density);

/// Metro/core fiber for the new sites of a decile.
Cents metro_core_fiber(double area_km2, long long total_sites, long long new_sites,
                       double alpha_pct, double fiber_cost_per_m_usd,
                       FiberDistanceMode mode = FiberDistanceMode::site_density);

/// Undiscounted opex of one site to the horizon: opex rate × hardware
/// value plus planning, logistics and installation labor, every year.
Cents opex_to_horizon(const CapexBreakdown& site, const CostBook& book, int horizon_years);

double satellite_per_user_month(const CostBook& book, IncomeGroup group);
Cents satellite_cost(double users, IncomeGroup group, const CostBook& book, int horizon_years);

struct DecileCostResult {
  CapexBreakdown capex;
  Cents metro_core_fiber;
  Cents opex;
  Cents satellite;
  Cents policy;
  Cents skills;

  Cents total() const {
    return capex.total() + metro_core_fiber + opex + satellite + policy + skills;
  }
  bool operator==(const DecileCostResult&) const = default;
};

struct DecileCostInputs {
  double area_km2 = 0.0;
  double served_users = 0.0;
  // Fraction of the decile's existing sites with fiber backhaul; the same
  // share of new and upgraded sites is priced with fiber.
  double fiber_fraction = 0.0;
  IncomeGroup income_group = IncomeGroup::LIDC;
  int horizon_years = 0;
  FiberDistanceMode fiber_distance_mode = FiberDistanceMode::site_density;
};

/// Prices the terrestrial plan of a decile, per-user overheads included.
DecileCostResult price_terrestrial(const CostBook& book, const DecilePlan& plan,
                                   const DecileCostInputs& in);
/// Prices satellite service for every served user of a decile, per-user
/// overheads included.
DecileCostResult price_satellite(const CostBook& book, const DecileCostInputs& in);

/// Mean total cost of ownership per user. Throws DomainError when cost is
/// positive but there are no users.
double tpu(Cents total_cost, double served_users);
double total_cost(double tpu_usd, double unconnected_users);

struct CountryRollup {
  Cents numerator;  // Σ decile totals
  double served_users = 0.0;
  double unconnected_users = 0.0;
  double tpu_usd = 0.0;
  double total_cost_usd = 0.0;  // tpu × unconnected
  Cents total_cost_cents;       // total_cost_usd rounded, used in aggregation
  double gdp_usd = 0.0;
  double gdp_share_pct = 0.0;
};

CountryRollup roll_up(std::span<const DecileCostResult> deciles, double served_users,
                      double unconnected_users, double gdp_usd);

}  // namespace ubcost
