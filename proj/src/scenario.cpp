#include "ubcost/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "io.hpp"
#include "parallel.hpp"
#include "yaml_util.hpp"

namespace ubcost {

namespace {

std::size_t group_index(IncomeGroup g) { return static_cast<std::size_t>(g); }

std::string_view to_string(GrowthMode m) { return m == GrowthMode::compound ? "compound" : "literal"; }
std::string_view to_string(FiberDistanceMode m) {
  return m == FiberDistanceMode::site_density ? "site_density" : "literal";
}

}  // namespace

void Scenario::validate() const {
  auto fail = [this](const std::string& m) { throw DomainError("scenario '" + name + "': " + m); };
  if (name.empty()) throw DomainError("scenario: name must not be empty");
  for (char ch : name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
      fail("name may only contain letters, digits, '_', '-' and '.'");
  if (monthly_gb)
    for (double v : *monthly_gb)
      if (!(v >= 0.0) || !std::isfinite(v)) fail("monthly_gb values must be >= 0");
  if (reliability_pct && !(*reliability_pct > 0.0 && *reliability_pct < 100.0))
    fail("reliability_pct must be in (0, 100)");
  if (adoption_rate_pct && !(*adoption_rate_pct >= 0.0 && *adoption_rate_pct <= 100.0))
    fail("adoption_rate_pct must be in [0, 100]");
  TrafficProfile{0.0, days_per_month, busy_hour_share_pct}.validate();
  if (end_year && (*end_year < 1900 || *end_year > 2200)) fail("end_year out of range");
}

double Scenario::monthly_gb_for(const CountryParams& c) const {
  return monthly_gb ? (*monthly_gb)[group_index(c.income_group)] : c.monthly_data_target_gb;
}

double Scenario::reliability_for(const CountryParams& c) const {
  return reliability_pct.value_or(c.reliability_pct);
}

CountryParams Scenario::apply(const CountryParams& c) const {
  CountryParams out = c;
  out.monthly_data_target_gb = monthly_gb_for(c);
  out.reliability_pct = reliability_for(c);
  if (adoption_rate_pct) out.adoption_rate_pct = *adoption_rate_pct;
  if (end_year) out.end_year = *end_year;
  if (out.end_year < out.start_year)
    throw DomainError(c.country_iso3 + ": end_year " + std::to_string(out.end_year) +
                      " precedes start_year " + std::to_string(out.start_year));
  return out;
}

std::string Scenario::canonical() const {
  std::ostringstream s;
  s << "name=" << name << "\nmonthly_gb=";
  if (monthly_gb) {
    for (auto g : kIncomeGroups)
      s << to_string(g) << ':' << format_double((*monthly_gb)[group_index(g)]) << ';';
  }
  s << "\nreliability_pct=" << (reliability_pct ? format_double(*reliability_pct) : "")
    << "\nadoption_rate_pct=" << (adoption_rate_pct ? format_double(*adoption_rate_pct) : "")
    << "\nbusy_hour_share_pct=" << format_double(busy_hour_share_pct)
    << "\ndays_per_month=" << days_per_month
    << "\nend_year=" << (end_year ? std::to_string(*end_year) : "")
    << "\nlookup_config=" << lookup_config.generic_string()
    << "\ngrowth_mode=" << to_string(growth_mode)
    << "\nfiber_distance_mode=" << to_string(fiber_distance_mode) << '\n';
  return s.str();
}

std::string Scenario::hash() const { return io::sha256_hex(canonical()).substr(0, 16); }

Scenario baseline_scenario() {
  Scenario s;
  s.name = "baseline";
  s.monthly_gb = std::array<double, 3>{};
  (*s.monthly_gb)[group_index(IncomeGroup::AE)] = 50.0;
  (*s.monthly_gb)[group_index(IncomeGroup::EME)] = 50.0;
  (*s.monthly_gb)[group_index(IncomeGroup::LIDC)] = 40.0;
  s.reliability_pct = 95.0;
  return s;
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  auto root = yaml::parse_map(text, source);
  yaml::reject_unknown(root,
                       {"name", "monthly_gb", "reliability_pct", "adoption_rate_pct",
                        "busy_hour_share_pct", "days_per_month", "end_year", "lookup_config",
                        "growth_mode", "fiber_distance_mode"},
                       source);
  Scenario s;
  yaml::read(root, "name", s.name, source);
  if (auto m = root["monthly_gb"]) {
    if (!m.IsMap()) throw DomainError(std::string(source) + ": monthly_gb must map AE/EME/LIDC to GB");
    const std::string where = std::string(source) + ": monthly_gb";
    yaml::reject_unknown(m, {"AE", "EME", "LIDC"}, where);
    std::array<double, 3> gb{};
    for (auto g : kIncomeGroups)
      gb[group_index(g)] = yaml::require<double>(m, to_string(g), where);
    s.monthly_gb = gb;
  }
  if (auto n = root["reliability_pct"]) s.reliability_pct = yaml::get<double>(n, "reliability_pct", source);
  if (auto n = root["adoption_rate_pct"]) s.adoption_rate_pct = yaml::get<double>(n, "adoption_rate_pct", source);
  yaml::read(root, "busy_hour_share_pct", s.busy_hour_share_pct, source);
  yaml::read(root, "days_per_month", s.days_per_month, source);
  if (auto n = root["end_year"]) s.end_year = yaml::get<int>(n, "end_year", source);
  if (auto n = root["lookup_config"]) s.lookup_config = yaml::get<std::string>(n, "lookup_config", source);
  if (auto n = root["growth_mode"]) {
    const auto v = yaml::get<std::string>(n, "growth_mode", source);
    if (v == "compound") s.growth_mode = GrowthMode::compound;
    else if (v == "literal") s.growth_mode = GrowthMode::literal;
    else throw DomainError(std::string(source) + ": key 'growth_mode' must be compound or literal");
  }
  if (auto n = root["fiber_distance_mode"]) {
    const auto v = yaml::get<std::string>(n, "fiber_distance_mode", source);
    if (v == "site_density") s.fiber_distance_mode = FiberDistanceMode::site_density;
    else if (v == "literal") s.fiber_distance_mode = FiberDistanceMode::literal;
    else throw DomainError(std::string(source) +
                           ": key 'fiber_distance_mode' must be site_density or literal");
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string(source) + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  auto s = parse_scenario(io::read_file(path), path.filename().string());
  if (!s.lookup_config.empty() && s.lookup_config.is_relative())
    s.lookup_config = path.parent_path() / s.lookup_config;
  return s;
}

std::string scenario_keys_help() {
  return R"(Scenario keys (YAML):
  name                  identifier used in result rows              [baseline]
  monthly_gb            {AE: .., EME: .., LIDC: ..} GB per user/month [country value]
  reliability_pct       capacity percentile target, (0, 100)        [country value]
  adoption_rate_pct     overrides every country's adoption           [country value]
  busy_hour_share_pct   daily traffic in the busy hour               [15]
  days_per_month        28..31                                       [30]
  end_year              horizon end year                             [country value]
  lookup_config         sim config file, relative to the scenario    [built-in defaults]
  growth_mode           compound | literal                           [compound]
  fiber_distance_mode   site_density | literal                       [site_density]
)";
}

CountryResult run_country(const CountryParams& country_in, std::span<const AreaRecord> areas,
                          const CostBook& book, const Scenario& scenario,
                          const LookupSet& lookups) {
  try {
    const CountryParams c = scenario.apply(country_in);
    CountryResult out;
    out.country_iso3 = c.country_iso3;
    out.income_group = c.income_group;
    out.region = c.region;
    if (c.fiber_share_defaulted)
      out.notes.push_back("fiber backhaul share defaulted to " +
                          format_double(c.fiber_backhaul_share_pct) + "% for region " +
                          std::string(to_string(c.region)));

    const auto deciles = build_deciles(areas);
    const auto assets = allocate_fiber(
        allocate_sites(deciles, c.total_sites, c.coverage_4g_pct, c.coverage_2g_pct),
        c.fiber_backhaul_share_pct);
    const double rate =
        busy_hour_rate({c.monthly_data_target_gb, scenario.days_per_month, scenario.busy_hour_share_pct});
    const auto tables = lookups.for_portfolio(c.spectrum_portfolio, c.reliability_pct);
    for (const auto& t : tables)
      if (t.any_clamped())
        out.notes.push_back("lookup " + lookup_file_name(t.frequency_mhz, t.reliability_pct) +
                            " has isotonically clamped rows");
    const int horizon = book.horizon_years.value_or(c.years());

    std::vector<DecileCostResult> costs;
    double served_total = 0.0;
    for (std::size_t i = 0; i < deciles.size(); ++i) {
      const auto& dec = deciles[i];
      DecileDetail d;
      d.decile = dec;
      d.assets = assets[i];
      const auto users = active_users(dec.population, c.pop_growth_rate_pct_per_year, c.years(),
                                      c.adoption_rate_pct, c.market_share_pct,
                                      c.active_share_pct, scenario.growth_mode);
      d.demand = {users.active_users, users.served_users, rate,
                  demand_density(users.active_users, rate, dec.area_km2)};
      d.plan = plan_decile(dec, d.assets, d.demand.demand_density_mbps_km2, c.spectrum_portfolio,
                           tables);
      if (d.plan.unmeetable)
        out.notes.push_back("decile " + std::to_string(dec.index) +
                            ": demand exceeds the terrestrial capacity curve");

      const DecileCostInputs in{dec.area_km2,
                                users.served_users,
                                d.assets.total_sites() > 0
                                    ? static_cast<double>(d.assets.fiber_backhaul_sites) /
                                          static_cast<double>(d.assets.total_sites())
                                    : 0.0,
                                c.income_group,
                                horizon,
                                scenario.fiber_distance_mode};
      const auto satellite = price_satellite(book, in);
      const double served = users.served_users;
      d.satellite_cost_per_user = served > 0.0 ? satellite.total().usd() / served : 0.0;

      if (d.plan.unmeetable) {
        d.plan = with_satellite(d.plan, served);
        d.cost = satellite;
      } else {
        d.cost = price_terrestrial(book, d.plan, in);
        d.terrestrial_cost_per_user = served > 0.0 ? d.cost.total().usd() / served : 0.0;
        if (d.plan.strategy == Strategy::terrestrial && served > 0.0 &&
            choose_satellite(d.terrestrial_cost_per_user, d.satellite_cost_per_user) ==
                Strategy::satellite) {
          d.plan = with_satellite(d.plan, served);
          d.cost = satellite;
        }
      }
      served_total += served;
      costs.push_back(d.cost);
      out.deciles.push_back(std::move(d));
    }

    out.rollup = roll_up(costs, served_total, c.unconnected_users, c.gdp_usd);
    std::vector<Cents> weights;
    for (const auto& d : out.deciles) weights.push_back(d.cost.total());
    const auto parts = apportion(out.rollup.total_cost_cents, weights);
    for (std::size_t i = 0; i < parts.size(); ++i) out.deciles[i].attributed_total_cost = parts[i];
    return out;
  } catch (const DomainError& e) {
    throw DomainError(country_in.country_iso3 + ": " + e.what());
  }
}

std::vector<Cents> apportion(Cents total, std::span<const Cents> weights) {
  if (total.value() < 0) throw DomainError("apportion: negative total");
  __int128 sum = 0;
  for (auto w : weights) {
    if (w.value() < 0) throw DomainError("apportion: negative weight");
    sum += w.value();
  }
  std::vector<Cents> out(weights.size());
  if (sum == 0) {
    if (total.value() != 0) throw DomainError("apportion: positive total over zero weights");
    return out;
  }
  std::vector<__int128> remainders(weights.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const __int128 scaled = static_cast<__int128>(total.value()) * weights[i].value();
    out[i] = Cents(static_cast<std::int64_t>(scaled / sum));
    remainders[i] = scaled % sum;
    assigned += out[i].value();
  }
  std::vector<std::size_t> order(weights.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::int64_t left = total.value() - assigned, k = 0; left > 0; --left, ++k)
    out[order[static_cast<std::size_t>(k)]] += Cents(1);
  return out;
}

double AggregateRow::gdp_share_pct() const {
  return gdp_usd > 0.0 ? total_cost.usd() / gdp_usd * 100.0 : 0.0;
}

const AggregateRow* AggregateReport::find(std::string_view level, std::string_view key,
                                          int decile) const {
  for (const auto& r : rows)
    if (r.level == level && r.key == key && r.decile == decile) return &r;
  return nullptr;
}

AggregateReport aggregate(std::string scenario_name, std::vector<CountryResult> countries) {
  std::sort(countries.begin(), countries.end(),
            [](const auto& a, const auto& b) { return a.country_iso3 < b.country_iso3; });
  for (std::size_t i = 1; i < countries.size(); ++i)
    if (countries[i].country_iso3 == countries[i - 1].country_iso3)
      throw DomainError("aggregate: duplicate country " + countries[i].country_iso3);

  AggregateReport report;
  report.scenario_name = std::move(scenario_name);

  auto add_country = [](AggregateRow& row, const CountryResult& c) {
    row.total_cost += c.rollup.total_cost_cents;
    row.gdp_usd += c.rollup.gdp_usd;
    row.unconnected_users += c.rollup.unconnected_users;
    ++row.countries;
  };

  AggregateRow global;
  global.level = "global";
  global.key = "all";
  for (const auto& c : countries) add_country(global, c);
  report.rows.push_back(global);
  report.global_total = global.total_cost;

  // Group/region rows followed by their decile breakdown. Decile rows
  // carry the parent's GDP, unconnected users and country count.
  auto emit = [&](std::string_view level, std::string key, auto matches) {
    AggregateRow parent;
    parent.level = level;
    parent.key = std::move(key);
    std::array<Cents, kDecileCount> by_decile{};
    for (const auto& c : countries) {
      if (!matches(c)) continue;
      add_country(parent, c);
      for (const auto& d : c.deciles) by_decile[static_cast<std::size_t>(d.decile.index - 1)] +=
                                      d.attributed_total_cost;
    }
    report.rows.push_back(parent);
    return std::make_pair(parent, by_decile);
  };
  std::vector<std::pair<AggregateRow, std::array<Cents, kDecileCount>>> decile_sources;
  for (auto g : kIncomeGroups)
    decile_sources.push_back(emit("income_group", std::string(to_string(g)),
                                  [g](const CountryResult& c) { return c.income_group == g; }));
  for (auto r : kRegions)
    decile_sources.push_back(emit("region", std::string(to_string(r)),
                                  [r](const CountryResult& c) { return c.region == r; }));
  for (const auto& [parent, by_decile] : decile_sources) {
    for (int k = 0; k < kDecileCount; ++k) {
      AggregateRow row = parent;
      row.level = parent.level + "_decile";
      row.decile = k + 1;
      row.total_cost = by_decile[static_cast<std::size_t>(k)];
      report.rows.push_back(row);
    }
  }
  report.countries = std::move(countries);
  return report;
}

std::vector<std::pair<double, double>> required_lookups(const Dataset& ds,
                                                        const Scenario& scenario) {
  std::set<std::pair<double, double>> pairs;
  for (const auto& c : ds.countries) {
    const double rel = scenario.reliability_for(c);
    for (const auto& b : c.spectrum_portfolio) pairs.insert({b.frequency_mhz, rel});
  }
  return {pairs.begin(), pairs.end()};
}

AggregateReport run_global(const Dataset& ds, const Scenario& scenario, const LookupSet& lookups,
                           unsigned jobs) {
  scenario.validate();
  std::vector<const CountryParams*> order;
  for (const auto& c : ds.countries) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->country_iso3 < b->country_iso3; });

  std::vector<CountryResult> results(order.size());
  parallel::for_each_index(order.size(), jobs, [&](std::size_t i) {
    const auto& c = *order[i];
    const auto book = cost_book_for_country(ds.cost_book, ds.wages, c.country_iso3);
    const auto areas = ds.areas_for(c.country_iso3);
    results[i] = run_country(c, areas, book, scenario, lookups);
  });
  return aggregate(scenario.name, std::move(results));
}

SweepTable compare(std::vector<AggregateReport> reports, std::string_view baseline_name) {
  if (reports.size() < 2) throw DomainError("sweep: needs at least two scenarios");
  std::set<std::string> names;
  for (const auto& r : reports)
    if (!names.insert(r.scenario_name).second)
      throw DomainError("sweep: duplicate scenario name '" + r.scenario_name + "'");
  if (!names.contains(std::string(baseline_name)))
    throw DomainError("sweep: baseline scenario '" + std::string(baseline_name) +
                      "' not among scenarios");

  SweepTable table;
  table.baseline = baseline_name;
  table.reports = std::move(reports);
  const auto& base = *std::find_if(table.reports.begin(), table.reports.end(),
                                   [&](const auto& r) { return r.scenario_name == baseline_name; });
  for (const auto& rep : table.reports) {
    for (const auto& row : rep.rows) {
      if (row.decile != 0) continue;
      const auto* b = base.find(row.level, row.key);
      SweepRow s{rep.scenario_name, row.level, row.key, row.total_cost, {}, 0.0};
      s.delta_vs_baseline = row.total_cost - b->total_cost;
      s.delta_pct = b->total_cost.value() != 0
                        ? static_cast<double>(s.delta_vs_baseline.value()) /
                              static_cast<double>(b->total_cost.value()) * 100.0
                        : 0.0;
      table.rows.push_back(s);
    }
  }
  return table;
}

SweepTable sweep(const Dataset& ds, std::span<const Scenario> scenarios,
                 std::string_view baseline_name, const LookupSet& lookups, unsigned jobs) {
  if (scenarios.size() < 2) throw DomainError("sweep: needs at least two scenarios");
  std::set<std::string> names;
  for (const auto& s : scenarios)
    if (!names.insert(s.name).second)
      throw DomainError("sweep: duplicate scenario name '" + s.name + "'");
  std::vector<AggregateReport> reports;
  for (const auto& s : scenarios) reports.push_back(run_global(ds, s, lookups, jobs));
  return compare(std::move(reports), baseline_name);
}

void write_country_results(std::ostream& os, const AggregateReport& report) {
  os << "scenario,country_iso3,income_group,region,served_users,unconnected_users,"
        "cost_numerator_usd,tpu_usd,total_cost_usd,gdp_usd,gdp_share_pct\n";
  for (const auto& c : report.countries) {
    const auto& r = c.rollup;
    os << report.scenario_name << ',' << c.country_iso3 << ',' << to_string(c.income_group) << ','
       << to_string(c.region) << ',' << format_double(r.served_users) << ','
       << format_double(r.unconnected_users) << ',' << format_usd(r.numerator) << ','
       << format_double(r.tpu_usd) << ',' << format_usd(r.total_cost_cents) << ','
       << format_double(r.gdp_usd) << ',' << format_double(r.gdp_share_pct) << '\n';
  }
}

void write_decile_results(std::ostream& os, const AggregateReport& report) {
  os << "scenario,country_iso3,decile,population,area_km2,density_per_km2,existing_4g_sites,"
        "existing_non4g_sites,fiber_backhaul_sites,served_users,active_users,per_user_mbps,"
        "demand_mbps_km2,required_density_per_km2,required_total_sites,new_builds,upgrades,"
        "strategy,unmeetable,satellite_users,capex_ran_usd,capex_backhaul_usd,capex_civils_usd,"
        "capex_power_usd,labor_planning_usd,labor_logistics_usd,labor_construction_usd,"
        "labor_installation_usd,capex_total_usd,metro_core_fiber_usd,opex_usd,satellite_usd,"
        "policy_usd,skills_usd,total_usd,terrestrial_cost_per_user_usd,"
        "satellite_cost_per_user_usd,attributed_total_cost_usd\n";
  for (const auto& c : report.countries) {
    for (const auto& d : c.deciles) {
      const auto& k = d.cost.capex;
      os << report.scenario_name << ',' << c.country_iso3 << ',' << d.decile.index << ','
         << format_double(d.decile.population) << ',' << format_double(d.decile.area_km2) << ','
         << format_double(d.decile.density()) << ',' << d.assets.existing_4g_sites << ','
         << d.assets.existing_non4g_sites << ',' << d.assets.fiber_backhaul_sites << ','
         << format_double(d.demand.served_users) << ',' << format_double(d.demand.active_users)
         << ',' << format_double(d.demand.per_user_rate_mbps) << ','
         << format_double(d.demand.demand_density_mbps_km2) << ','
         << format_double(d.plan.required_density) << ',' << d.plan.required_total_sites << ','
         << d.plan.new_builds << ',' << d.plan.upgrades << ',' << to_string(d.plan.strategy)
         << ',' << (d.plan.unmeetable ? "true" : "false") << ','
         << format_double(d.plan.satellite_users) << ',' << format_usd(k.ran) << ','
         << format_usd(k.backhaul) << ',' << format_usd(k.civils) << ',' << format_usd(k.power)
         << ',' << format_usd(k.labor_planning) << ',' << format_usd(k.labor_logistics) << ','
         << format_usd(k.labor_construction) << ',' << format_usd(k.labor_installation) << ','
         << format_usd(k.total()) << ',' << format_usd(d.cost.metro_core_fiber) << ','
         << format_usd(d.cost.opex) << ',' << format_usd(d.cost.satellite) << ','
         << format_usd(d.cost.policy) << ',' << format_usd(d.cost.skills) << ','
         << format_usd(d.cost.total()) << ',' << format_double(d.terrestrial_cost_per_user)
         << ',' << format_double(d.satellite_cost_per_user) << ','
         << format_usd(d.attributed_total_cost) << '\n';
    }
  }
}

void write_aggregate_results(std::ostream& os, const AggregateReport& report) {
  os << "scenario,level,key,decile,total_cost_usd,gdp_usd,gdp_share_pct,unconnected_users,"
        "countries\n";
  for (const auto& r : report.rows)
    os << report.scenario_name << ',' << r.level << ',' << r.key << ',' << r.decile << ','
       << format_usd(r.total_cost) << ',' << format_double(r.gdp_usd) << ','
       << format_double(r.gdp_share_pct()) << ',' << format_double(r.unconnected_users) << ','
       << r.countries << '\n';
}

void write_sweep(std::ostream& os, const SweepTable& table) {
  os << "scenario,baseline,level,key,total_cost_usd,delta_usd,delta_pct\n";
  for (const auto& r : table.rows)
    os << r.scenario << ',' << table.baseline << ',' << r.level << ',' << r.key << ','
       << format_usd(r.total_cost) << ',' << format_usd(r.delta_vs_baseline) << ','
       << format_double(r.delta_pct) << '\n';
}

void write_deciles_diagnostic(std::ostream& os, const AggregateReport& report) {
  os << "country_iso3,decile,areas,population,area_km2,density_per_km2,existing_4g_sites,"
        "existing_non4g_sites,fiber_backhaul_sites\n";
  for (const auto& c : report.countries)
    for (const auto& d : c.deciles)
      os << c.country_iso3 << ',' << d.decile.index << ',' << d.decile.member_area_ids.size()
         << ',' << format_double(d.decile.population) << ',' << format_double(d.decile.area_km2)
         << ',' << format_double(d.decile.density()) << ',' << d.assets.existing_4g_sites << ','
         << d.assets.existing_non4g_sites << ',' << d.assets.fiber_backhaul_sites << '\n';
}

}  // namespace ubcost
