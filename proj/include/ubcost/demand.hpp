#pragma once

namespace ubcost {

/// How the population growth factor is evaluated.
///   compound: (1 + G/100)^y
///   literal:  1 + (G/100)^y, the printed form kept for audit comparisons
enum class GrowthMode { compound, literal };

struct TrafficProfile {
  double monthly_gb = 0.0;
  int days_per_month = 30;
  double busy_hour_share_pct = 15.0;

  void validate() const;  // throws DomainError
};

struct UserCounts {
  double active_users = 0.0;  // users transmitting in the busy hour
  double served_users = 0.0;  // operator subscriber base, before the active share
};

struct DemandResult {
  double active_users = 0.0;
  double served_users = 0.0;
  double per_user_rate_mbps = 0.0;
  double demand_density_mbps_km2 = 0.0;
};

double growth_factor(double growth_pct, double years, GrowthMode mode = GrowthMode::compound);

/// Busy-hour active users of the modeled operator in an area of population
/// `population` after `years` of growth.
UserCounts active_users(double population, double growth_pct, double years, double adoption_pct,
                        double market_share_pct, double active_share_pct,
                        GrowthMode mode = GrowthMode::compound);

/// Mean busy-hour rate per user in Mbps: GB/month → Mbit/day → busy-hour
/// Mbit → Mbps.
double busy_hour_rate(const TrafficProfile& profile);

/// Traffic demand density in Mbps/km².
double demand_density(double active_users, double per_user_rate_mbps, double area_km2);

}  // namespace ubcost
