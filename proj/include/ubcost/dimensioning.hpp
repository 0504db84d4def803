#pragma once

#include <span>
#include <string_view>

#include "ubcost/deciles.hpp"
#include "ubcost/radio.hpp"
#include "ubcost/types.hpp"

namespace ubcost {

enum class Strategy { terrestrial, satellite, none_needed };
std::string_view to_string(Strategy s);

struct DensityRequirement {
  bool meetable = true;
  double density = 0.0;       // sites/km², valid when meetable
  double max_capacity = 0.0;  // Mbps/km² at the top of the grid
};

/// Smallest site density whose interpolated area capacity reaches the
/// demand, by bisection over the monotone capacity curve.
DensityRequirement required_density(double demand_mbps_km2,
                                    std::span<const SpectrumBand> portfolio,
                                    std::span<const CapacityLookup> lookups);

struct DecilePlan {
  int decile_index = 0;
  double required_density = 0.0;
  long long required_total_sites = 0;
  long long existing_4g_sites = 0;
  long long existing_non4g_sites = 0;
  long long new_builds = 0;
  long long upgrades = 0;
  Strategy strategy = Strategy::none_needed;
  double satellite_users = 0.0;
  bool unmeetable = false;  // demand above the terrestrial curve

  long long new_sites() const { return new_builds + upgrades; }
};

/// Site count for a continuous density over an area, rounded up. Products
/// within 1e-9 (relative) of an integer snap to it so bisection residue
/// does not add a site.
long long sites_for_density(double density, double area_km2);

/// Sites needed to serve `demand_density` and how the shortfall over
/// existing 4G sites splits into upgrades of non-4G towers (first) and
/// greenfield builds.
DecilePlan plan_decile(const Decile& decile, const DecileAssets& assets, double demand_density,
                       std::span<const SpectrumBand> portfolio,
                       std::span<const CapacityLookup> lookups);

/// Satellite wins only when strictly cheaper per user.
Strategy choose_satellite(double terrestrial_cost_per_user, double satellite_cost_per_user);

/// Converts a plan to satellite service for `users`; drops terrestrial builds.
DecilePlan with_satellite(DecilePlan plan, double users);

}  // namespace ubcost
