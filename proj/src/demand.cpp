#include "ubcost/demand.hpp"

#include <cmath>
#include <string>

#include "ubcost/types.hpp"

namespace ubcost {

void TrafficProfile::validate() const {
  if (!(monthly_gb >= 0.0)) throw DomainError("monthly_gb must be >= 0");
  if (days_per_month < 28 || days_per_month > 31)
    throw DomainError("days_per_month must be in 28..31, got " + std::to_string(days_per_month));
  if (!(busy_hour_share_pct > 0.0 && busy_hour_share_pct <= 100.0))
    throw DomainError("busy_hour_share_pct must be in (0, 100]");
}

double growth_factor(double growth_pct, double years, GrowthMode mode) {
  const double g = growth_pct / 100.0;
  return mode == GrowthMode::compound ? std::pow(1.0 + g, years) : 1.0 + std::pow(g, years);
}

UserCounts active_users(double population, double growth_pct, double years, double adoption_pct,
                        double market_share_pct, double active_share_pct, GrowthMode mode) {
  if (population < 0.0 || years < 0.0 || adoption_pct < 0.0 || market_share_pct < 0.0 ||
      active_share_pct < 0.0)
    throw DomainError("active_users: negative input");
  if (adoption_pct > 100.0 || market_share_pct > 100.0 || active_share_pct > 100.0)
    throw DomainError("active_users: percentage above 100");
  UserCounts u;
  u.served_users = population * growth_factor(growth_pct, years, mode) * (adoption_pct / 100.0) *
                   (market_share_pct / 100.0);
  u.active_users = u.served_users * (active_share_pct / 100.0);
  return u;
}

double busy_hour_rate(const TrafficProfile& profile) {
  profile.validate();
  return profile.monthly_gb * 1000.0 * 8.0 / profile.days_per_month *
         (profile.busy_hour_share_pct / 100.0) / 3600.0;
}

double demand_density(double active_users, double per_user_rate_mbps, double area_km2) {
  if (!(area_km2 > 0.0)) throw DomainError("demand_density: area must be > 0");
  if (active_users < 0.0 || per_user_rate_mbps < 0.0)
    throw DomainError("demand_density: negative input");
  return active_users * per_user_rate_mbps / area_km2;
}

}  // namespace ubcost
