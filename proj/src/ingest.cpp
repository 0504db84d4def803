#include "ubcost/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "io.hpp"

namespace ubcost {

namespace {

constexpr std::string_view kAreasHeader[] = {"area_id", "country_iso3", "population", "area_km2"};
constexpr std::string_view kWagesHeader[] = {"country_iso3", "sector", "hourly_wage_usd",
                                             "gdp_per_capita_usd"};
constexpr std::string_view kCountriesHeader[] = {
    "country_iso3",      "income_group",           "region",
    "pop_growth_rate_pct_per_year",                "start_year",
    "end_year",          "adoption_rate_pct",      "market_share_pct",
    "active_share_pct",  "total_sites",            "coverage_2g_pct",
    "coverage_4g_pct",   "fiber_backhaul_share_pct", "spectrum_portfolio",
    "unconnected_users", "gdp_usd",                "monthly_data_target_gb",
    "reliability_pct"};

bool is_iso3(std::string_view s) {
  return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

// Maps header names to column positions; records unknown, missing and
// duplicate columns.
class Header {
 public:
  Header(const csv::Line& line, std::span<const std::string_view> expected, std::string_view file,
         std::vector<Violation>& out) {
    auto cells = csv::split(line.text);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::string name(cells[i]);
      if (std::find(expected.begin(), expected.end(), name) == expected.end()) {
        out.push_back({std::string(file), line.number, name, "unknown column"});
        ok_ = false;
      } else if (!index_.emplace(name, i).second) {
        out.push_back({std::string(file), line.number, name, "duplicate column"});
        ok_ = false;
      }
    }
    for (auto name : expected) {
      if (!index_.count(std::string(name))) {
        out.push_back({std::string(file), line.number, std::string(name), "missing column"});
        ok_ = false;
      }
    }
    width_ = cells.size();
  }

  bool ok() const { return ok_; }
  std::size_t width() const { return width_; }
  std::size_t at(std::string_view name) const { return index_.at(std::string(name)); }

 private:
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
  bool ok_ = true;
};

// Per-row field access that records violations instead of throwing.
class RowReader {
 public:
  RowReader(const Header& h, const csv::Line& line, std::string_view file,
            std::vector<Violation>& out)
      : header_(h), line_(line), file_(file), out_(out), cells_(csv::split(line.text)) {
    if (cells_.size() != h.width()) {
      fail("", "expected " + std::to_string(h.width()) + " cells, found " +
                   std::to_string(cells_.size()));
      ok_ = false;
    }
  }

  bool ok() const { return ok_; }

  std::string_view raw(std::string_view name) const {
    auto i = header_.at(name);
    return i < cells_.size() ? cells_[i] : std::string_view{};
  }

  std::string text(std::string_view name) {
    auto v = raw(name);
    if (v.empty()) fail(name, "empty value");
    return std::string(v);
  }

  double number(std::string_view name) {
    auto v = csv::to_double(raw(name));
    if (!v || !std::isfinite(*v)) {
      fail(name, "not a number: '" + std::string(raw(name)) + "'");
      return 0.0;
    }
    return *v;
  }

  std::optional<double> optional_number(std::string_view name) {
    if (raw(name).empty()) return std::nullopt;
    return number(name);
  }

  long long integer(std::string_view name) {
    auto v = csv::to_integer(raw(name));
    if (!v) {
      fail(name, "not an integer: '" + std::string(raw(name)) + "'");
      return 0;
    }
    return *v;
  }

  void fail(std::string_view field, std::string message) {
    out_.push_back({std::string(file_), line_.number, std::string(field), std::move(message)});
    ok_ = false;
  }

  void check(bool cond, std::string_view field, double value, std::string_view rule) {
    if (!cond) fail(field, "value " + format_double(value) + " violates " + std::string(rule));
  }

  std::size_t line() const { return line_.number; }

 private:
  const Header& header_;
  csv::Line line_;
  std::string_view file_;
  std::vector<Violation>& out_;
  std::vector<std::string_view> cells_;
  bool ok_ = true;
};

bool is_percent(double v) { return v >= 0.0 && v <= 100.0; }

}  // namespace

std::string Violation::describe() const {
  std::string s = file;
  if (line) s += ":" + std::to_string(line);
  if (!field.empty()) s += ": " + field;
  return s + ": " + message;
}

ValidationError::ValidationError(std::vector<Violation> v)
    : DomainError(v.empty() ? std::string("validation failed")
                            : v.front().describe() +
                                  (v.size() > 1 ? " (and " + std::to_string(v.size() - 1) +
                                                      " more)"
                                                : std::string())),
      violations_(std::move(v)) {}

double default_fiber_share_pct(Region r) {
  switch (r) {
    case Region::AE_region: return 33.0;
    case Region::CCA: return 33.0;
    case Region::EDA: return 17.0;
    case Region::EDE: return 33.0;
    case Region::LAC: return 21.0;
    case Region::MENAP: return 20.0;
    case Region::SSA: return 15.0;
  }
  return 15.0;
}

std::string encode_portfolio(std::span<const SpectrumBand> bands) {
  std::string out;
  for (const auto& b : bands) {
    if (!out.empty()) out += '|';
    out += format_double(b.frequency_mhz) + ":" + format_double(b.bandwidth_mhz);
  }
  return out;
}

std::optional<std::vector<SpectrumBand>> decode_portfolio(std::string_view text) {
  std::vector<SpectrumBand> out;
  if (csv::trim(text).empty()) return std::nullopt;
  for (auto item : csv::split(text, '|')) {
    auto parts = csv::split(item, ':');
    if (parts.size() != 2) return std::nullopt;
    auto f = csv::to_double(parts[0]);
    auto bw = csv::to_double(parts[1]);
    if (!f || !bw) return std::nullopt;
    out.push_back({*f, *bw});
  }
  return out;
}

const CountryParams* Dataset::find_country(std::string_view iso3) const {
  for (const auto& c : countries)
    if (c.country_iso3 == iso3) return &c;
  return nullptr;
}

std::vector<AreaRecord> Dataset::areas_for(std::string_view iso3) const {
  std::vector<AreaRecord> out;
  for (const auto& a : areas)
    if (a.country_iso3 == iso3) out.push_back(a);
  return out;
}

double Dataset::national_population(std::string_view iso3) const {
  double total = 0.0;
  for (const auto& a : areas)
    if (a.country_iso3 == iso3) total += a.population;
  return total;
}

std::vector<double> Dataset::portfolio_frequencies() const {
  std::set<double> freqs;
  for (const auto& c : countries)
    for (const auto& b : c.spectrum_portfolio) freqs.insert(b.frequency_mhz);
  return {freqs.begin(), freqs.end()};
}

InputPaths InputPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "areas.csv", dir / "countries.csv", dir / "wages.csv", dir / "costbook.yaml"};
}

std::vector<AreaRecord> parse_areas(std::string_view text, std::string_view file,
                                    std::vector<Violation>& out) {
  std::vector<AreaRecord> areas;
  auto rows = csv::lines(text);
  if (rows.empty()) {
    out.push_back({std::string(file), 0, "", "empty file"});
    return areas;
  }
  Header header(rows.front(), kAreasHeader, file, out);
  if (!header.ok()) return areas;

  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    RowReader r(header, rows[i], file, out);
    if (!r.ok()) continue;
    AreaRecord a;
    a.area_id = r.text("area_id");
    a.country_iso3 = r.text("country_iso3");
    a.population = r.number("population");
    a.area_km2 = r.number("area_km2");
    if (!a.country_iso3.empty() && !is_iso3(a.country_iso3))
      r.fail("country_iso3", "not a 3-letter upper-case code: '" + a.country_iso3 + "'");
    r.check(a.population >= 0.0, "population", a.population, "population >= 0");
    r.check(a.area_km2 > 0.0, "area_km2", a.area_km2, "area_km2 > 0");
    if (!seen.emplace(a.country_iso3, a.area_id).second)
      r.fail("area_id", "duplicate area '" + a.area_id + "' in " + a.country_iso3);
    if (r.ok()) areas.push_back(std::move(a));
  }
  return areas;
}

std::vector<CountryParams> parse_countries(std::string_view text, std::string_view file,
                                           std::vector<Violation>& out,
                                           std::vector<std::string>* notes) {
  std::vector<CountryParams> countries;
  auto rows = csv::lines(text);
  if (rows.empty()) {
    out.push_back({std::string(file), 0, "", "empty file"});
    return countries;
  }
  Header header(rows.front(), kCountriesHeader, file, out);
  if (!header.ok()) return countries;

  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    RowReader r(header, rows[i], file, out);
    if (!r.ok()) continue;
    CountryParams c;
    c.country_iso3 = r.text("country_iso3");
    if (!c.country_iso3.empty() && !is_iso3(c.country_iso3))
      r.fail("country_iso3", "not a 3-letter upper-case code: '" + c.country_iso3 + "'");
    if (!seen.insert(c.country_iso3).second) r.fail("country_iso3", "duplicate country");

    auto group = parse_income_group(r.raw("income_group"));
    if (group) c.income_group = *group;
    else r.fail("income_group", "expected AE, EME or LIDC, found '" + std::string(r.raw("income_group")) + "'");
    auto region = parse_region(r.raw("region"));
    if (region) c.region = *region;
    else r.fail("region", "unknown region '" + std::string(r.raw("region")) + "'");

    c.start_year = static_cast<int>(r.integer("start_year"));
    c.end_year = static_cast<int>(r.integer("end_year"));
    r.check(c.end_year >= c.start_year, "end_year", c.end_year, "end_year >= start_year");

    auto percent = [&](std::string_view name) {
      double v = r.number(name);
      r.check(is_percent(v), name, v, "0 <= percent <= 100");
      return v;
    };
    c.pop_growth_rate_pct_per_year = percent("pop_growth_rate_pct_per_year");
    c.adoption_rate_pct = percent("adoption_rate_pct");
    c.market_share_pct = percent("market_share_pct");
    c.active_share_pct = percent("active_share_pct");
    c.coverage_2g_pct = percent("coverage_2g_pct");
    c.coverage_4g_pct = percent("coverage_4g_pct");
    c.reliability_pct = r.number("reliability_pct");
    r.check(c.reliability_pct > 0.0 && c.reliability_pct < 100.0, "reliability_pct",
            c.reliability_pct, "0 < reliability < 100");

    c.total_sites = r.integer("total_sites");
    r.check(c.total_sites >= 0, "total_sites", static_cast<double>(c.total_sites), "total_sites >= 0");

    if (auto share = r.optional_number("fiber_backhaul_share_pct")) {
      c.fiber_backhaul_share_pct = *share;
      r.check(is_percent(*share), "fiber_backhaul_share_pct", *share, "0 <= percent <= 100");
    } else {
      c.fiber_backhaul_share_pct = default_fiber_share_pct(c.region);
      c.fiber_share_defaulted = true;
      if (notes)
        notes->push_back(std::string(file) + ":" + std::to_string(r.line()) + ": " +
                         c.country_iso3 + " fiber_backhaul_share_pct missing, using " +
                         std::string(to_string(c.region)) + " default " +
                         format_double(c.fiber_backhaul_share_pct));
    }

    if (auto bands = decode_portfolio(r.raw("spectrum_portfolio"))) {
      c.spectrum_portfolio = *bands;
      for (const auto& b : c.spectrum_portfolio) {
        r.check(b.frequency_mhz > 0.0, "spectrum_portfolio", b.frequency_mhz, "frequency > 0");
        r.check(b.bandwidth_mhz > 0.0, "spectrum_portfolio", b.bandwidth_mhz, "bandwidth > 0");
      }
      for (std::size_t i = 0; i < c.spectrum_portfolio.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (c.spectrum_portfolio[i].frequency_mhz == c.spectrum_portfolio[j].frequency_mhz)
            r.fail("spectrum_portfolio",
                   "frequency " + format_double(c.spectrum_portfolio[i].frequency_mhz) +
                       " MHz listed twice");
    } else {
      r.fail("spectrum_portfolio",
             "expected non-empty 'freq:bw|freq:bw', found '" +
                 std::string(r.raw("spectrum_portfolio")) + "'");
    }

    c.unconnected_users = r.number("unconnected_users");
    r.check(c.unconnected_users >= 0.0, "unconnected_users", c.unconnected_users, ">= 0");
    c.gdp_usd = r.number("gdp_usd");
    r.check(c.gdp_usd > 0.0, "gdp_usd", c.gdp_usd, "gdp_usd > 0");
    c.monthly_data_target_gb = r.number("monthly_data_target_gb");
    r.check(c.monthly_data_target_gb >= 0.0, "monthly_data_target_gb", c.monthly_data_target_gb,
            ">= 0");
    if (r.ok()) countries.push_back(std::move(c));
  }
  return countries;
}

std::vector<WageRow> parse_wages(std::string_view text, std::string_view file,
                                 std::vector<Violation>& out) {
  std::vector<WageRow> wages;
  auto rows = csv::lines(text);
  if (rows.empty()) {
    out.push_back({std::string(file), 0, "", "empty file"});
    return wages;
  }
  Header header(rows.front(), kWagesHeader, file, out);
  if (!header.ok()) return wages;

  std::set<std::pair<std::string, Sector>> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    RowReader r(header, rows[i], file, out);
    if (!r.ok()) continue;
    WageRow w;
    w.country_iso3 = r.text("country_iso3");
    if (!w.country_iso3.empty() && !is_iso3(w.country_iso3))
      r.fail("country_iso3", "not a 3-letter upper-case code: '" + w.country_iso3 + "'");
    auto sector = parse_sector(r.raw("sector"));
    if (sector) w.sector = *sector;
    else r.fail("sector", "expected ICT, logistics or construction, found '" + std::string(r.raw("sector")) + "'");
    w.hourly_wage_usd = r.optional_number("hourly_wage_usd");
    if (w.hourly_wage_usd)
      r.check(*w.hourly_wage_usd > 0.0, "hourly_wage_usd", *w.hourly_wage_usd, "wage > 0");
    w.gdp_per_capita_usd = r.number("gdp_per_capita_usd");
    r.check(w.gdp_per_capita_usd > 0.0, "gdp_per_capita_usd", w.gdp_per_capita_usd,
            "gdp_per_capita > 0");
    if (sector && !seen.emplace(w.country_iso3, w.sector).second)
      r.fail("sector", "duplicate wage row for " + w.country_iso3);
    if (r.ok()) wages.push_back(std::move(w));
  }
  return wages;
}

ValidationReport validate_inputs(const InputPaths& paths) {
  ValidationReport report;
  auto& v = report.violations;

  const auto areas_text = io::read_file(paths.areas);
  const auto countries_text = io::read_file(paths.countries);
  const auto wages_text = io::read_file(paths.wages);
  const auto book_text = io::read_file(paths.cost_book);

  const auto areas_name = paths.areas.filename().string();
  const auto countries_name = paths.countries.filename().string();
  Dataset ds;
  ds.areas = parse_areas(areas_text, areas_name, v);
  ds.countries = parse_countries(countries_text, countries_name, v, &report.notes);
  ds.wages = parse_wages(wages_text, paths.wages.filename().string(), v);
  try {
    ds.cost_book = parse_cost_book(book_text, paths.cost_book.filename().string());
  } catch (const DomainError& e) {
    v.push_back({paths.cost_book.filename().string(), 0, "", e.what()});
  }

  // Cross references only over clean rows; a rejected row would otherwise
  // resurface as a short country or a population mismatch.
  if (!v.empty()) return report;
  std::map<std::string, double> population;
  std::map<std::string, std::size_t> area_count;
  std::set<std::string> known;
  for (const auto& c : ds.countries) known.insert(c.country_iso3);
  std::set<std::string> reported_unknown;
  for (const auto& a : ds.areas) {
    population[a.country_iso3] += a.population;
    ++area_count[a.country_iso3];
    if (!known.count(a.country_iso3) && reported_unknown.insert(a.country_iso3).second)
      v.push_back({areas_name, 0, "country_iso3",
                   "area rows reference unknown country " + a.country_iso3});
  }
  for (const auto& c : ds.countries) {
    if (!area_count.count(c.country_iso3)) {
      v.push_back({countries_name, 0, "country_iso3",
                   c.country_iso3 + " has no rows in " + areas_name});
      continue;
    }
    if (area_count[c.country_iso3] < 10)
      v.push_back({areas_name, 0, "area_id",
                   c.country_iso3 + " has " + std::to_string(area_count[c.country_iso3]) +
                       " areas; at least 10 are needed to form deciles"});
    if (c.unconnected_users > population[c.country_iso3])
      v.push_back({countries_name, 0, "unconnected_users",
                   c.country_iso3 + " unconnected_users " + format_double(c.unconnected_users) +
                       " exceeds area population " + format_double(population[c.country_iso3])});
  }

  if (v.empty()) report.dataset = std::move(ds);
  return report;
}

Dataset load_inputs(const InputPaths& paths) {
  auto report = validate_inputs(paths);
  if (!report.violations.empty()) throw ValidationError(std::move(report.violations));
  return std::move(*report.dataset);
}

void write_areas_csv(std::ostream& os, std::span<const AreaRecord> areas) {
  os << "area_id,country_iso3,population,area_km2\n";
  for (const auto& a : areas)
    os << a.area_id << ',' << a.country_iso3 << ',' << format_double(a.population) << ','
       << format_double(a.area_km2) << '\n';
}

void write_countries_csv(std::ostream& os, std::span<const CountryParams> countries) {
  for (std::size_t i = 0; i < std::size(kCountriesHeader); ++i)
    os << (i ? "," : "") << kCountriesHeader[i];
  os << '\n';
  for (const auto& c : countries) {
    os << c.country_iso3 << ',' << to_string(c.income_group) << ',' << to_string(c.region) << ','
       << format_double(c.pop_growth_rate_pct_per_year) << ',' << c.start_year << ','
       << c.end_year << ',' << format_double(c.adoption_rate_pct) << ','
       << format_double(c.market_share_pct) << ',' << format_double(c.active_share_pct) << ','
       << c.total_sites << ',' << format_double(c.coverage_2g_pct) << ','
       << format_double(c.coverage_4g_pct) << ','
       << (c.fiber_share_defaulted ? std::string() : format_double(c.fiber_backhaul_share_pct))
       << ',' << encode_portfolio(c.spectrum_portfolio) << ','
       << format_double(c.unconnected_users) << ',' << format_double(c.gdp_usd) << ','
       << format_double(c.monthly_data_target_gb) << ',' << format_double(c.reliability_pct)
       << '\n';
  }
}

void write_wages_csv(std::ostream& os, std::span<const WageRow> wages) {
  os << "country_iso3,sector,hourly_wage_usd,gdp_per_capita_usd\n";
  for (const auto& w : wages)
    os << w.country_iso3 << ',' << to_string(w.sector) << ','
       << (w.hourly_wage_usd ? format_double(*w.hourly_wage_usd) : std::string()) << ','
       << format_double(w.gdp_per_capita_usd) << '\n';
}

void write_dataset(const std::filesystem::path& dir, const Dataset& ds) {
  const auto paths = InputPaths::in_directory(dir);
  std::ostringstream areas, countries, wages;
  write_areas_csv(areas, ds.areas);
  write_countries_csv(countries, ds.countries);
  write_wages_csv(wages, ds.wages);
  io::write_file_atomic(paths.areas, areas.str());
  io::write_file_atomic(paths.countries, countries.str());
  io::write_file_atomic(paths.wages, wages.str());
  io::write_file_atomic(paths.cost_book, serialize_cost_book(ds.cost_book));
}

double SectorFit::predict(double gdp_per_capita) const {
  return std::exp(intercept + slope * std::log(gdp_per_capita));
}

bool WageImputation::fits_at_least(double r_squared) const {
  return std::all_of(fits.begin(), fits.end(),
                     [&](const SectorFit& f) { return f.r_squared >= r_squared; });
}

WageImputation impute_wages(std::span<const WageRow> wages) {
  WageImputation result;
  result.rows.assign(wages.begin(), wages.end());

  for (auto sector : {Sector::ICT, Sector::Logistics, Sector::Construction}) {
    std::vector<double> x, y;
    std::size_t missing = 0;
    bool present = false;
    for (const auto& w : wages) {
      if (w.sector != sector) continue;
      present = true;
      if (!(w.gdp_per_capita_usd > 0.0))
        throw DomainError("wage imputation: non-positive gdp_per_capita_usd for " +
                          w.country_iso3 + " " + std::string(to_string(sector)));
      if (w.hourly_wage_usd) {
        x.push_back(std::log(w.gdp_per_capita_usd));
        y.push_back(std::log(*w.hourly_wage_usd));
      } else {
        ++missing;
      }
    }
    if (!present) continue;
    if (x.size() < 2)
      throw DomainError("wage imputation: sector " + std::string(to_string(sector)) +
                        " has " + std::to_string(x.size()) +
                        " observed wage(s), at least 2 are required");

    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
      syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0))
      throw DomainError("wage imputation: sector " + std::string(to_string(sector)) +
                        " has no variation in gdp_per_capita_usd");

    SectorFit fit;
    fit.sector = sector;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    // All observed wages equal: the flat fit is exact.
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.observed = x.size();
    fit.imputed = missing;

    for (auto& w : result.rows) {
      if (w.sector != sector || w.hourly_wage_usd) continue;
      w.hourly_wage_usd = fit.predict(w.gdp_per_capita_usd);
      w.imputed = true;
    }
    result.fits.push_back(fit);
  }
  return result;
}

CostBook cost_book_for_country(const CostBook& base, std::span<const WageRow> wages,
                               std::string_view iso3) {
  CostBook book = base;
  for (const auto& w : wages) {
    if (w.country_iso3 != iso3 || !w.hourly_wage_usd) continue;
    switch (w.sector) {
      case Sector::ICT: book.wage_ict_usd_hr = *w.hourly_wage_usd; break;
      case Sector::Logistics: book.wage_logistics_usd_hr = *w.hourly_wage_usd; break;
      case Sector::Construction: book.wage_construction_usd_hr = *w.hourly_wage_usd; break;
    }
  }
  return book;
}

}  // namespace ubcost
