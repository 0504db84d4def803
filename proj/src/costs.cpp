#include "ubcost/costs.hpp"

#include <cmath>
#include <sstream>

#include "io.hpp"
#include "ubcost/dimensioning.hpp"
#include "yaml_util.hpp"

namespace ubcost {

int CostBook::users_per_subscription(IncomeGroup g) const {
  switch (g) {
    case IncomeGroup::LIDC: return satellite_users_per_subscription.lidc;
    case IncomeGroup::EME: return satellite_users_per_subscription.eme;
    case IncomeGroup::AE: return satellite_users_per_subscription.ae;
  }
  throw DomainError("unknown income group");
}

void CostBook::validate() const {
  auto money = [](std::string_view key, double v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("costbook: " + std::string(key) + " must be a finite value >= 0");
  };
  money("ran_usd", ran_usd);
  money("backhaul_wireless_usd", backhaul_wireless_usd);
  money("backhaul_fiber_per_m_usd", backhaul_fiber_per_m_usd);
  money("civils_usd", civils_usd);
  money("power_system_usd", power_system_usd);
  money("labor_hours_per_component", labor_hours_per_component);
  money("wage_ict_usd_hr", wage_ict_usd_hr);
  money("wage_logistics_usd_hr", wage_logistics_usd_hr);
  money("wage_construction_usd_hr", wage_construction_usd_hr);
  money("fiber_cost_per_m_usd", fiber_cost_per_m_usd);
  money("policy_per_user_usd", policy_per_user_usd);
  money("skills_per_user_usd", skills_per_user_usd);
  money("satellite_monthly_usd", satellite_monthly_usd);
  if (!(opex_rate_pct_per_year >= 0.0 && opex_rate_pct_per_year <= 100.0))
    throw DomainError("costbook: opex_rate_pct_per_year must be in [0, 100]");
  if (!(fiber_core_split_alpha_pct >= 0.0 && fiber_core_split_alpha_pct <= 100.0))
    throw DomainError("costbook: fiber_core_split_alpha_pct must be in [0, 100]");
  const auto& s = satellite_users_per_subscription;
  if (s.lidc < 1 || s.eme < 1 || s.ae < 1)
    throw DomainError("costbook: satellite_users_per_subscription entries must be >= 1");
  if (horizon_years && *horizon_years < 0)
    throw DomainError("costbook: horizon_years must be >= 0");
}

CostBook parse_cost_book(std::string_view text, std::string_view source) {
  auto root = yaml::parse_map(text, source);
  yaml::reject_unknown(
      root,
      {"ran_usd", "backhaul_wireless_usd", "backhaul_fiber_per_m_usd", "civils_usd",
       "power_system_usd", "labor_hours_per_component", "wage_ict_usd_hr", "wage_logistics_usd_hr",
       "wage_construction_usd_hr", "opex_rate_pct_per_year", "fiber_core_split_alpha_pct",
       "fiber_cost_per_m_usd", "policy_per_user_usd", "skills_per_user_usd",
       "satellite_monthly_usd", "satellite_users_per_subscription", "horizon_years"},
      source);
  CostBook b;
  b.ran_usd = yaml::require<double>(root, "ran_usd", source);
  b.backhaul_wireless_usd = yaml::require<double>(root, "backhaul_wireless_usd", source);
  b.backhaul_fiber_per_m_usd = yaml::require<double>(root, "backhaul_fiber_per_m_usd", source);
  b.civils_usd = yaml::require<double>(root, "civils_usd", source);
  b.power_system_usd = yaml::require<double>(root, "power_system_usd", source);
  b.fiber_cost_per_m_usd = yaml::require<double>(root, "fiber_cost_per_m_usd", source);
  yaml::read(root, "labor_hours_per_component", b.labor_hours_per_component, source);
  yaml::read(root, "wage_ict_usd_hr", b.wage_ict_usd_hr, source);
  yaml::read(root, "wage_logistics_usd_hr", b.wage_logistics_usd_hr, source);
  yaml::read(root, "wage_construction_usd_hr", b.wage_construction_usd_hr, source);
  yaml::read(root, "opex_rate_pct_per_year", b.opex_rate_pct_per_year, source);
  yaml::read(root, "fiber_core_split_alpha_pct", b.fiber_core_split_alpha_pct, source);
  yaml::read(root, "policy_per_user_usd", b.policy_per_user_usd, source);
  yaml::read(root, "skills_per_user_usd", b.skills_per_user_usd, source);
  yaml::read(root, "satellite_monthly_usd", b.satellite_monthly_usd, source);
  if (auto s = root["satellite_users_per_subscription"]) {
    if (!s.IsMap())
      throw DomainError(std::string(source) +
                        ": satellite_users_per_subscription must map LIDC/EME/AE to counts");
    yaml::reject_unknown(s, {"LIDC", "EME", "AE"},
                         std::string(source) + ": satellite_users_per_subscription");
    yaml::read(s, "LIDC", b.satellite_users_per_subscription.lidc, source);
    yaml::read(s, "EME", b.satellite_users_per_subscription.eme, source);
    yaml::read(s, "AE", b.satellite_users_per_subscription.ae, source);
  }
  if (auto h = root["horizon_years"]; h && !h.IsNull())
    b.horizon_years = yaml::get<int>(h, "horizon_years", source);
  try {
    b.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string(source) + ": " + e.what());
  }
  return b;
}

CostBook load_cost_book(const std::filesystem::path& path) {
  return parse_cost_book(io::read_file(path), path.filename().string());
}

std::string serialize_cost_book(const CostBook& b) {
  std::ostringstream s;
  auto kv = [&](std::string_view k, double v) { s << k << ": " << format_double(v) << '\n'; };
  kv("ran_usd", b.ran_usd);
  kv("backhaul_wireless_usd", b.backhaul_wireless_usd);
  kv("backhaul_fiber_per_m_usd", b.backhaul_fiber_per_m_usd);
  kv("civils_usd", b.civils_usd);
  kv("power_system_usd", b.power_system_usd);
  kv("labor_hours_per_component", b.labor_hours_per_component);
  kv("wage_ict_usd_hr", b.wage_ict_usd_hr);
  kv("wage_logistics_usd_hr", b.wage_logistics_usd_hr);
  kv("wage_construction_usd_hr", b.wage_construction_usd_hr);
  kv("opex_rate_pct_per_year", b.opex_rate_pct_per_year);
  kv("fiber_core_split_alpha_pct", b.fiber_core_split_alpha_pct);
  kv("fiber_cost_per_m_usd", b.fiber_cost_per_m_usd);
  kv("policy_per_user_usd", b.policy_per_user_usd);
  kv("skills_per_user_usd", b.skills_per_user_usd);
  kv("satellite_monthly_usd", b.satellite_monthly_usd);
  const auto& sp = b.satellite_users_per_subscription;
  s << "satellite_users_per_subscription:\n  LIDC: " << sp.lidc << "\n  EME: " << sp.eme
    << "\n  AE: " << sp.ae << '\n';
  if (b.horizon_years) s << "horizon_years: " << *b.horizon_years << '\n';
  return s.str();
}

std::string cost_book_keys_help() {
  return R"(Cost book keys (YAML, 2020 US$):
  ran_usd                           radio equipment per site            [required]
  backhaul_wireless_usd             wireless backhaul unit per site     [required]
  backhaul_fiber_per_m_usd          fiber backhaul per meter            [required]
  civils_usd                        tower civil works, greenfield only  [required]
  power_system_usd                  power system per site               [required]
  fiber_cost_per_m_usd              metro/core fiber per meter          [required]
  labor_hours_per_component         hours per labor component           [16]
  wage_ict_usd_hr                   fallback wage; wages.csv overrides  [0]
  wage_logistics_usd_hr             fallback wage; wages.csv overrides  [0]
  wage_construction_usd_hr          fallback wage; wages.csv overrides  [0]
  opex_rate_pct_per_year            share of hardware value per year    [15]
  fiber_core_split_alpha_pct        alpha, metro/core share             [10]
  policy_per_user_usd               one-off per served user             [2]
  skills_per_user_usd               one-off per served user             [12]
  satellite_monthly_usd             subscription price per month        [200]
  satellite_users_per_subscription  {LIDC: 12, EME: 8, AE: 4}
  horizon_years                     overrides end_year - start_year     [unset]
)";
}

CapexBreakdown CapexBreakdown::times(long long n) const {
  auto m = [n](Cents c) { return Cents(c.value() * n); };
  return {m(ran),            m(backhaul),        m(civils),             m(power),
          m(labor_planning), m(labor_logistics), m(labor_construction), m(labor_installation)};
}

CapexBreakdown& CapexBreakdown::operator+=(const CapexBreakdown& o) {
  ran += o.ran;
  backhaul += o.backhaul;
  civils += o.civils;
  power += o.power;
  labor_planning += o.labor_planning;
  labor_logistics += o.labor_logistics;
  labor_construction += o.labor_construction;
  labor_installation += o.labor_installation;
  return *this;
}

CapexBreakdown site_capex(const CostBook& book, BackhaulType backhaul, bool greenfield,
                          double fiber_distance_km) {
  if (!(fiber_distance_km >= 0.0)) throw DomainError("site_capex: fiber distance must be >= 0");
  const double hours = book.labor_hours_per_component;
  CapexBreakdown c;
  c.ran = Cents::from_usd(book.ran_usd);
  c.backhaul = Cents::from_usd(backhaul == BackhaulType::fiber
                                   ? book.backhaul_fiber_per_m_usd * fiber_distance_km * 1000.0
                                   : book.backhaul_wireless_usd);
  c.civils = greenfield ? Cents::from_usd(book.civils_usd) : Cents{};
  c.power = Cents::from_usd(book.power_system_usd);
  c.labor_planning = Cents::from_usd(hours * book.wage_ict_usd_hr);
  c.labor_logistics = Cents::from_usd(hours * book.wage_logistics_usd_hr);
  c.labor_construction = greenfield ? Cents::from_usd(hours * book.wage_construction_usd_hr) : Cents{};
  c.labor_installation = Cents::from_usd(hours * book.wage_ict_usd_hr);
  return c;
}

double mean_intersite_distance_km(double area_km2, long long total_sites, FiberDistanceMode mode) {
  if (total_sites < 1) throw DomainError("mean inter-site distance needs at least one site");
  if (!(area_km2 >= 0.0)) throw DomainError("mean inter-site distance: area must be >= 0");
  const double per_site = mode == FiberDistanceMode::site_density
                              ? area_km2 / static_cast<double>(total_sites)
                              : 1.0 / static_cast<double>(total_sites);
  return 0.5 * std::sqrt(per_site);
}

Cents metro_core_fiber(double area_km2, long long total_sites, long long new_sites,
                       double alpha_pct, double fiber_cost_per_m_usd, FiberDistanceMode mode) {
  if (new_sites < 0) throw DomainError("metro_core_fiber: new sites must be >= 0");
  if (new_sites == 0) return {};
  if (total_sites < 1) throw DomainError("metro_core_fiber: new sites but zero total sites");
  const double d = mean_intersite_distance_km(area_km2, total_sites, mode);
  return Cents::from_usd(d * 1000.0 * static_cast<double>(new_sites) * (alpha_pct / 100.0) *
                         fiber_cost_per_m_usd);
}

Cents opex_to_horizon(const CapexBreakdown& site, const CostBook& book, int horizon_years) {
  if (horizon_years < 0) throw DomainError("opex: horizon must be >= 0");
  const Cents hardware_yearly =
      Cents::from_usd(site.hardware().usd() * book.opex_rate_pct_per_year / 100.0);
  const Cents labor_yearly = site.labor_planning + site.labor_logistics + site.labor_installation;
  return Cents((hardware_yearly + labor_yearly).value() * horizon_years);
}

double satellite_per_user_month(const CostBook& book, IncomeGroup group) {
  return book.satellite_monthly_usd / book.users_per_subscription(group);
}

Cents satellite_cost(double users, IncomeGroup group, const CostBook& book, int horizon_years) {
  if (!(users >= 0.0)) throw DomainError("satellite_cost: users must be >= 0");
  if (horizon_years < 0) throw DomainError("satellite_cost: horizon must be >= 0");
  return Cents::from_usd(book.satellite_monthly_usd * users * 12.0 * horizon_years /
                         book.users_per_subscription(group));
}

namespace {

void add_overheads(DecileCostResult& r, const CostBook& book, double served_users) {
  r.policy = Cents::from_usd(book.policy_per_user_usd * served_users);
  r.skills = Cents::from_usd(book.skills_per_user_usd * served_users);
}

}  // namespace

DecileCostResult price_terrestrial(const CostBook& book, const DecilePlan& plan,
                                   const DecileCostInputs& in) {
  if (!(in.fiber_fraction >= 0.0 && in.fiber_fraction <= 1.0))
    throw DomainError("price_terrestrial: fiber fraction must be in [0, 1]");
  DecileCostResult r;
  add_overheads(r, book, in.served_users);
  if (plan.new_sites() == 0) return r;

  const double d = mean_intersite_distance_km(in.area_km2, plan.required_total_sites,
                                              in.fiber_distance_mode);
  const auto fiber_new = std::llround(in.fiber_fraction * static_cast<double>(plan.new_builds));
  const auto fiber_upg = std::llround(in.fiber_fraction * static_cast<double>(plan.upgrades));

  struct Batch {
    BackhaulType backhaul;
    bool greenfield;
    long long count;
  };
  const Batch batches[] = {{BackhaulType::fiber, true, fiber_new},
                           {BackhaulType::wireless, true, plan.new_builds - fiber_new},
                           {BackhaulType::fiber, false, fiber_upg},
                           {BackhaulType::wireless, false, plan.upgrades - fiber_upg}};
  for (const auto& b : batches) {
    if (b.count == 0) continue;
    const auto site = site_capex(book, b.backhaul, b.greenfield, d);
    r.capex += site.times(b.count);
    r.opex += Cents(opex_to_horizon(site, book, in.horizon_years).value() * b.count);
  }
  r.metro_core_fiber =
      metro_core_fiber(in.area_km2, plan.required_total_sites, plan.new_sites(),
                       book.fiber_core_split_alpha_pct, book.fiber_cost_per_m_usd,
                       in.fiber_distance_mode);
  return r;
}

DecileCostResult price_satellite(const CostBook& book, const DecileCostInputs& in) {
  DecileCostResult r;
  add_overheads(r, book, in.served_users);
  r.satellite = satellite_cost(in.served_users, in.income_group, book, in.horizon_years);
  return r;
}

double tpu(Cents total, double served_users) {
  if (served_users > 0.0) return total.usd() / served_users;
  if (total.value() == 0) return 0.0;
  throw DomainError("cost is positive but there are no served users");
}

double total_cost(double tpu_usd, double unconnected_users) {
  if (!(unconnected_users >= 0.0)) throw DomainError("unconnected users must be >= 0");
  return tpu_usd * unconnected_users;
}

CountryRollup roll_up(std::span<const DecileCostResult> deciles, double served_users,
                      double unconnected_users, double gdp_usd) {
  CountryRollup r;
  for (const auto& d : deciles) r.numerator += d.total();
  r.served_users = served_users;
  r.unconnected_users = unconnected_users;
  r.tpu_usd = tpu(r.numerator, served_users);
  r.total_cost_usd = total_cost(r.tpu_usd, unconnected_users);
  r.total_cost_cents = Cents::from_usd(r.total_cost_usd);
  r.gdp_usd = gdp_usd;
  r.gdp_share_pct = gdp_usd > 0.0 ? r.total_cost_usd / gdp_usd * 100.0 : 0.0;
  return r;
}

}  // namespace ubcost
