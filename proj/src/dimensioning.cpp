#include "ubcost/dimensioning.hpp"

#include <algorithm>
#include <cmath>

namespace ubcost {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::terrestrial: return "terrestrial";
    case Strategy::satellite: return "satellite";
    case Strategy::none_needed: return "none_needed";
  }
  return "?";
}

DensityRequirement required_density(double demand_mbps_km2,
                                    std::span<const SpectrumBand> portfolio,
                                    std::span<const CapacityLookup> lookups) {
  if (!(demand_mbps_km2 >= 0.0)) throw DomainError("required_density: demand must be >= 0");
  if (portfolio.empty()) throw DomainError("required_density: empty spectrum portfolio");

  // Interpolation stays exact only up to the shortest table.
  double top = lookups.empty() ? 0.0 : lookups.front().max_density();
  for (const auto& t : lookups) top = std::min(top, t.max_density());
  auto capacity = [&](double d) { return area_capacity(d, portfolio, lookups).mbps_per_km2; };

  DensityRequirement out;
  out.max_capacity = capacity(top);
  if (demand_mbps_km2 == 0.0) return out;
  if (demand_mbps_km2 > out.max_capacity) {
    out.meetable = false;
    return out;
  }
  double lo = 0.0, hi = top;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * top; ++i) {
    const double mid = 0.5 * (lo + hi);
    (capacity(mid) >= demand_mbps_km2 ? hi : lo) = mid;
  }
  out.density = hi;
  return out;
}

long long sites_for_density(double density, double area_km2) {
  if (!(density >= 0.0) || !(area_km2 >= 0.0))
    throw DomainError("sites_for_density: density and area must be >= 0");
  const double x = density * area_km2;
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(x));
}

DecilePlan plan_decile(const Decile& decile, const DecileAssets& assets, double demand_density,
                       std::span<const SpectrumBand> portfolio,
                       std::span<const CapacityLookup> lookups) {
  DecilePlan plan;
  plan.decile_index = decile.index;
  plan.existing_4g_sites = assets.existing_4g_sites;
  plan.existing_non4g_sites = assets.existing_non4g_sites;

  const auto need = required_density(demand_density, portfolio, lookups);
  if (!need.meetable) {
    plan.unmeetable = true;
    plan.strategy = Strategy::satellite;
    return plan;
  }
  plan.required_density = need.density;
  plan.required_total_sites = sites_for_density(need.density, decile.area_km2);

  const long long shortfall = std::max(0LL, plan.required_total_sites - assets.existing_4g_sites);
  plan.upgrades = std::min(shortfall, assets.existing_non4g_sites);
  plan.new_builds = shortfall - plan.upgrades;
  plan.strategy = shortfall > 0 ? Strategy::terrestrial : Strategy::none_needed;
  return plan;
}

Strategy choose_satellite(double terrestrial_cost_per_user, double satellite_cost_per_user) {
  return terrestrial_cost_per_user > satellite_cost_per_user ? Strategy::satellite
                                                             : Strategy::terrestrial;
}

DecilePlan with_satellite(DecilePlan plan, double users) {
  plan.strategy = Strategy::satellite;
  plan.new_builds = 0;
  plan.upgrades = 0;
  plan.satellite_users = users;
  return plan;
}

}  // namespace ubcost
