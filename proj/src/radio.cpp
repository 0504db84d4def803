#include "ubcost/radio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>

#include "csv.hpp"
#include "io.hpp"
#include "kernels/scalar_impl.hpp"
#include "parallel.hpp"
#include "yaml_util.hpp"

namespace ubcost {

namespace fs = std::filesystem;

std::vector<double> default_density_grid() {
  std::vector<double> grid;
  constexpr int kPoints = 12;
  const double lo = std::log10(0.001), hi = std::log10(10.0);
  for (int i = 0; i < kPoints; ++i)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (kPoints - 1)));
  grid.back() = 10.0;
  grid.front() = 0.001;
  return grid;
}

SimConfig::SimConfig() : density_grid(default_density_grid()) {}

void SimConfig::validate() const {
  auto fail = [](const std::string& m) { throw DomainError("sim config: " + m); };
  if (iterations < 1) fail("iterations must be >= 1");
  if (!(shadow_sigma_db >= 0.0)) fail("shadow_sigma_db must be >= 0");
  if (cells_per_site < 1) fail("cells_per_site must be >= 1");
  if (!(se_attenuation > 0.0 && se_attenuation <= 1.0)) fail("se_attenuation must be in (0, 1]");
  if (!(se_max_bps_hz > 0.0)) fail("se_max_bps_hz must be > 0");
  if (interferer_ring < 0 || interferer_ring > kernels::kMaxInterferers)
    fail("interferer_ring must be in 0..6");
  if (!(channel_bandwidth_mhz > 0.0)) fail("channel_bandwidth_mhz must be > 0");
  if (!(min_distance_km > 0.0)) fail("min_distance_km must be > 0");
  if (density_grid.size() < 2) fail("density_grid needs at least 2 points");
  for (std::size_t i = 0; i < density_grid.size(); ++i) {
    if (!(density_grid[i] > 0.0) || !std::isfinite(density_grid[i]))
      fail("density_grid values must be positive");
    if (i && !(density_grid[i] > density_grid[i - 1]))
      fail("density_grid must be strictly increasing");
  }
  for (double f : frequencies_mhz)
    if (!(f > 0.0)) fail("frequencies_mhz must be positive");
  for (double r : reliabilities_pct)
    if (!(r > 0.0 && r < 100.0)) fail("reliabilities_pct must be in (0, 100)");
}

std::string SimConfig::canonical() const {
  std::ostringstream s;
  s << "iterations=" << iterations << "\nrng_seed=" << rng_seed
    << "\nshadow_mu_db=" << format_double(shadow_mu_db)
    << "\nshadow_sigma_db=" << format_double(shadow_sigma_db)
    << "\ncells_per_site=" << cells_per_site
    << "\nse_attenuation=" << format_double(se_attenuation)
    << "\nse_max_bps_hz=" << format_double(se_max_bps_hz)
    << "\ninterferer_ring=" << interferer_ring
    << "\nue_noise_figure_db=" << format_double(ue_noise_figure_db)
    << "\ntx_power_dbm=" << format_double(tx_power_dbm)
    << "\nantenna_gain_dbi=" << format_double(antenna_gain_dbi)
    << "\nthermal_noise_dbm_hz=" << format_double(thermal_noise_dbm_hz)
    << "\nchannel_bandwidth_mhz=" << format_double(channel_bandwidth_mhz)
    << "\nmin_distance_km=" << format_double(min_distance_km)
    << "\ninclude_noise=" << (include_noise ? 1 : 0) << "\ndensity_grid=";
  for (std::size_t i = 0; i < density_grid.size(); ++i)
    s << (i ? "," : "") << format_double(density_grid[i]);
  s << '\n';
  return s.str();
}

std::string SimConfig::hash() const { return io::sha256_hex(canonical()).substr(0, 16); }

SimConfig parse_sim_config(std::string_view text, std::string_view source) {
  auto root = yaml::parse_map(text, source);
  yaml::reject_unknown(
      root,
      {"iterations", "rng_seed", "shadow_mu_db", "shadow_sigma_db", "cells_per_site",
       "se_attenuation", "se_max_bps_hz", "interferer_ring", "ue_noise_figure_db", "tx_power_dbm",
       "antenna_gain_dbi", "thermal_noise_dbm_hz", "channel_bandwidth_mhz", "min_distance_km",
       "include_noise", "density_grid", "frequencies_mhz", "reliabilities_pct"},
      source);
  SimConfig c;
  long long iterations = static_cast<long long>(c.iterations);
  yaml::read(root, "iterations", iterations, source);
  if (iterations < 1) throw DomainError(std::string(source) + ": iterations must be >= 1");
  c.iterations = static_cast<std::size_t>(iterations);
  yaml::read(root, "rng_seed", c.rng_seed, source);
  yaml::read(root, "shadow_mu_db", c.shadow_mu_db, source);
  yaml::read(root, "shadow_sigma_db", c.shadow_sigma_db, source);
  yaml::read(root, "cells_per_site", c.cells_per_site, source);
  yaml::read(root, "se_attenuation", c.se_attenuation, source);
  yaml::read(root, "se_max_bps_hz", c.se_max_bps_hz, source);
  yaml::read(root, "interferer_ring", c.interferer_ring, source);
  yaml::read(root, "ue_noise_figure_db", c.ue_noise_figure_db, source);
  yaml::read(root, "tx_power_dbm", c.tx_power_dbm, source);
  yaml::read(root, "antenna_gain_dbi", c.antenna_gain_dbi, source);
  yaml::read(root, "thermal_noise_dbm_hz", c.thermal_noise_dbm_hz, source);
  yaml::read(root, "channel_bandwidth_mhz", c.channel_bandwidth_mhz, source);
  yaml::read(root, "min_distance_km", c.min_distance_km, source);
  yaml::read(root, "include_noise", c.include_noise, source);
  if (auto g = root["density_grid"]) {
    if (g.IsSequence()) {
      c.density_grid = yaml::number_list(g, "density_grid", source);
    } else if (g.IsMap()) {
      yaml::reject_unknown(g, {"min", "max", "points"}, std::string(source) + ": density_grid");
      const double lo = yaml::require<double>(g, "min", source);
      const double hi = yaml::require<double>(g, "max", source);
      const int points = yaml::require<int>(g, "points", source);
      if (!(lo > 0.0 && hi > lo) || points < 2)
        throw DomainError(std::string(source) + ": density_grid needs 0 < min < max, points >= 2");
      c.density_grid.clear();
      for (int i = 0; i < points; ++i)
        c.density_grid.push_back(
            std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (points - 1)));
      c.density_grid.front() = lo;
      c.density_grid.back() = hi;
    } else {
      throw DomainError(std::string(source) + ": density_grid must be a list or {min, max, points}");
    }
  }
  if (auto f = root["frequencies_mhz"]) c.frequencies_mhz = yaml::number_list(f, "frequencies_mhz", source);
  if (auto r = root["reliabilities_pct"]) c.reliabilities_pct = yaml::number_list(r, "reliabilities_pct", source);
  c.validate();
  return c;
}

SimConfig load_sim_config(const fs::path& path) {
  return parse_sim_config(io::read_file(path), path.filename().string());
}

std::string sim_config_keys_help() {
  return R"(Sim config keys (YAML):
  iterations              Monte Carlo draws per (frequency, density)   [10000]
  rng_seed                64-bit seed; --seed overrides                 [42]
  shadow_mu_db            log-normal shadowing mean, dB                 [2]
  shadow_sigma_db         log-normal shadowing deviation, dB            [10]
  cells_per_site          sectors per site                              [3]
  se_attenuation          beta applied to the Shannon bound, (0,1]      [0.75]
  se_max_bps_hz           spectral efficiency cap                       [8]
  interferer_ring         first-tier co-channel interferers, 0..6       [6]
  ue_noise_figure_db      receiver noise figure                         [7]
  tx_power_dbm            transmit power                                [40]
  antenna_gain_dbi        antenna gain                                  [16]
  thermal_noise_dbm_hz    thermal noise density                         [-174]
  channel_bandwidth_mhz   noise bandwidth                               [10]
  min_distance_km         closest user-to-site distance                 [0.001]
  include_noise           add thermal noise to interference             [true]
  density_grid            list of sites/km², or {min, max, points}      [{0.001, 10, 12}]
  frequencies_mhz         tables to build (lookup subcommand)           [dataset portfolios]
  reliabilities_pct       tables to build (lookup subcommand)           [dataset countries]
)";
}

double path_loss_db(double distance_km, double frequency_mhz) {
  if (!(distance_km > 0.0) || !(frequency_mhz > 0.0))
    throw DomainError("path_loss_db: distance and frequency must be > 0");
  return 20.0 * std::log10(distance_km) + 20.0 * std::log10(frequency_mhz) + 32.44;
}

double sinr_to_se(double sinr_linear, double beta, double se_max) {
  if (!(sinr_linear >= 0.0)) throw DomainError("sinr_to_se: sinr must be >= 0");
  return kernels::detail::se_one(sinr_linear, beta, se_max);
}

HexLayout hex_layout(double site_density, int interferer_ring) {
  if (!(site_density > 0.0)) throw DomainError("hex_layout: site density must be > 0");
  HexLayout h;
  h.site_area_km2 = 1.0 / site_density;
  h.cell_radius_km = std::sqrt(2.0 * h.site_area_km2 / (3.0 * std::numbers::sqrt3));
  h.inter_site_distance_km = std::numbers::sqrt3 * h.cell_radius_km;
  h.interferers.count = interferer_ring;
  for (int k = 0; k < interferer_ring; ++k) {
    // Neighbours sit across the hexagon's edges, at 30° + k·60°.
    const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
    h.interferers.x[k] = h.inter_site_distance_km * std::cos(angle);
    h.interferers.y[k] = h.inter_site_distance_km * std::sin(angle);
  }
  return h;
}

namespace {

constexpr std::size_t kChunk = 2048;
constexpr std::size_t kBatches = 20;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for one chunk of one (frequency, density) cell. Depends only
// on indices, never on scheduling.
std::uint64_t chunk_seed(std::uint64_t seed, double frequency, double density, std::size_t chunk) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(frequency));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(density));
  return splitmix64(h ^ chunk);
}

class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Box-Muller; the second variate of each pair is kept for the next call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

kernels::LinkConstants link_constants(double frequency_mhz, const SimConfig& c) {
  kernels::LinkConstants link;
  const double rx_dbm_at_1km =
      c.tx_power_dbm + c.antenna_gain_dbi - 32.44 - 20.0 * std::log10(frequency_mhz);
  link.rx_mw_at_1km = std::pow(10.0, rx_dbm_at_1km / 10.0);
  const double noise_dbm =
      c.thermal_noise_dbm_hz + 10.0 * std::log10(c.channel_bandwidth_mhz * 1e6) + c.ue_noise_figure_db;
  link.noise_mw = c.include_noise ? std::pow(10.0, noise_dbm / 10.0) : 0.0;
  link.min_distance_km = c.min_distance_km;
  return link;
}

double percentile_sorted(std::span<const double> sorted, double reliability_pct) {
  const double p = (100.0 - reliability_pct) / 100.0;
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

// Batch-means standard error of the percentile estimate.
double batch_standard_error(std::span<const double> sample, double reliability_pct) {
  if (sample.size() < 2 * kBatches) return 0.0;
  const std::size_t size = sample.size() / kBatches;
  std::vector<double> estimates;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const auto end = b + 1 == kBatches ? sample.size() : (b + 1) * size;
    std::vector<double> batch(sample.begin() + static_cast<std::ptrdiff_t>(b * size),
                              sample.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(batch.begin(), batch.end());
    estimates.push_back(percentile_sorted(batch, reliability_pct));
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(kBatches);
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / static_cast<double>(kBatches - 1)) / std::sqrt(static_cast<double>(kBatches));
}

}  // namespace

std::vector<double> simulate_sinr_linear(double site_density, double frequency_mhz,
                                         const SimConfig& config) {
  if (!(site_density > 0.0)) throw DomainError("simulate_sinr: site density must be > 0");
  if (!(frequency_mhz > 0.0)) throw DomainError("simulate_sinr: frequency must be > 0");
  config.validate();

  const auto hex = hex_layout(site_density, config.interferer_ring);
  const std::size_t n = config.iterations;
  const std::size_t rows = 1 + static_cast<std::size_t>(config.interferer_ring);
  std::vector<double> ux(n), uy(n), shadow(rows * n), sinr(n);

  // The hexagon splits into three rhombi spanned by vertices 2r and 2r+2.
  const double radius = hex.cell_radius_km;
  for (std::size_t c0 = 0, chunk = 0; c0 < n; c0 += kChunk, ++chunk) {
    SampleStream rng(chunk_seed(config.rng_seed, frequency_mhz, site_density, chunk));
    for (std::size_t i = c0; i < std::min(n, c0 + kChunk); ++i) {
      const int rhombus = std::min(2, static_cast<int>(3.0 * rng.uniform()));
      const double a = rng.uniform(), b = rng.uniform();
      const double t0 = rhombus * 2.0 * std::numbers::pi / 3.0;
      const double t1 = t0 + 2.0 * std::numbers::pi / 3.0;
      ux[i] = radius * (a * std::cos(t0) + b * std::cos(t1));
      uy[i] = radius * (a * std::sin(t0) + b * std::sin(t1));
      for (std::size_t r = 0; r < rows; ++r)
        shadow[r * n + i] = config.shadow_mu_db + config.shadow_sigma_db * rng.normal();
    }
  }

  kernels::active_kernels().sinr(hex.interferers, link_constants(frequency_mhz, config), ux, uy,
                                 shadow, sinr);
  return sinr;
}

std::vector<double> simulate_sinr(double site_density, double frequency_mhz,
                                  const SimConfig& config) {
  auto s = simulate_sinr_linear(site_density, frequency_mhz, config);
  for (auto& v : s) v = 10.0 * std::log10(v);
  return s;
}

double reliability_percentile(std::vector<double> sample, double reliability_pct) {
  if (sample.empty()) throw DomainError("reliability_percentile: empty sample");
  if (!(reliability_pct > 0.0 && reliability_pct < 100.0))
    throw DomainError("reliability must be in (0, 100)");
  std::sort(sample.begin(), sample.end());
  return percentile_sorted(sample, reliability_pct);
}

double CapacityLookup::value_at(double site_density, bool* clamped) const {
  if (clamped) *clamped = false;
  if (rows.empty()) return 0.0;
  if (site_density <= rows.front().site_density) return rows.front().se_density;
  if (site_density >= rows.back().site_density) {
    if (clamped && site_density > rows.back().site_density) *clamped = true;
    return rows.back().se_density;
  }
  auto hi = std::upper_bound(rows.begin(), rows.end(), site_density,
                             [](double d, const LookupRow& r) { return d < r.site_density; });
  auto lo = hi - 1;
  const double t = (site_density - lo->site_density) / (hi->site_density - lo->site_density);
  return lo->se_density + t * (hi->se_density - lo->se_density);
}

bool CapacityLookup::any_clamped() const {
  return std::any_of(rows.begin(), rows.end(), [](const LookupRow& r) { return r.clamped; });
}

void CapacityLookup::validate() const {
  const std::string name = lookup_file_name(frequency_mhz, reliability_pct);
  if (rows.size() < 2) throw DomainError(name + ": needs at least 2 rows");
  if (rows.front().site_density != 0.0 || rows.front().se_density != 0.0)
    throw DomainError(name + ": first row must be density 0 with value 0");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].site_density > rows[i - 1].site_density))
      throw DomainError(name + ": densities must be strictly increasing");
    if (!(rows[i].se_density >= rows[i - 1].se_density) || !std::isfinite(rows[i].se_density))
      throw DomainError(name + ": values must be finite and non-decreasing");
  }
}

std::vector<CapacityLookup> build_lookups(std::span<const double> frequencies_mhz,
                                          std::span<const double> reliabilities_pct,
                                          const SimConfig& config, unsigned jobs) {
  config.validate();
  if (frequencies_mhz.empty()) throw DomainError("build_lookup: no frequencies");
  if (reliabilities_pct.empty()) throw DomainError("build_lookup: no reliabilities");
  for (double r : reliabilities_pct)
    if (!(r > 0.0 && r < 100.0)) throw DomainError("build_lookup: reliability must be in (0, 100)");

  const auto& grid = config.density_grid;
  const std::size_t nf = frequencies_mhz.size(), nd = grid.size(), nr = reliabilities_pct.size();
  // values[(f·nd + d)·nr + r] = (per-cell SE percentile, its standard error)
  std::vector<std::pair<double, double>> values(nf * nd * nr);

  parallel::for_each_index(nf * nd, jobs, [&](std::size_t task) {
    const std::size_t f = task / nd, d = task % nd;
    const auto sinr = simulate_sinr_linear(grid[d], frequencies_mhz[f], config);
    std::vector<double> se(sinr.size());
    kernels::active_kernels().spectral_efficiency(sinr, config.se_attenuation,
                                                  config.se_max_bps_hz, se);
    std::vector<double> sorted = se;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t r = 0; r < nr; ++r)
      values[task * nr + r] = {percentile_sorted(sorted, reliabilities_pct[r]),
                               batch_standard_error(se, reliabilities_pct[r])};
  });

  std::vector<CapacityLookup> out;
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t r = 0; r < nr; ++r) {
      CapacityLookup t;
      t.frequency_mhz = frequencies_mhz[f];
      t.reliability_pct = reliabilities_pct[r];
      t.rows.push_back({0.0, 0.0, 0.0, false});
      for (std::size_t d = 0; d < nd; ++d) {
        const auto [pct, se] = values[(f * nd + d) * nr + r];
        const double scale = config.cells_per_site * grid[d];
        LookupRow row{grid[d], scale * pct, scale * se, false};
        if (row.se_density < t.rows.back().se_density) {
          row.se_density = t.rows.back().se_density;
          row.clamped = true;
        }
        t.rows.push_back(row);
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<CapacityLookup> build_lookup(std::span<const double> frequencies_mhz,
                                         std::span<const double> density_grid,
                                         double reliability_pct, const SimConfig& config,
                                         unsigned jobs) {
  if (density_grid.empty()) throw DomainError("build_lookup: empty density grid");
  SimConfig c = config;
  c.density_grid.assign(density_grid.begin(), density_grid.end());
  const double rel[] = {reliability_pct};
  return build_lookups(frequencies_mhz, rel, c, jobs);
}

std::string lookup_file_name(double frequency_mhz, double reliability_pct) {
  return "lookup_" + format_double(frequency_mhz) + "_" + format_double(reliability_pct) + ".csv";
}

void write_lookup_csv(std::ostream& os, const CapacityLookup& lookup) {
  os << "site_density_per_km2,se_density_bps_hz_km2\n";
  for (const auto& r : lookup.rows)
    os << format_double(r.site_density) << ',' << format_double(r.se_density) << '\n';
}

CapacityLookup parse_lookup_csv(std::string_view text, double frequency_mhz,
                                double reliability_pct, std::string_view source) {
  CapacityLookup t;
  t.frequency_mhz = frequency_mhz;
  t.reliability_pct = reliability_pct;
  auto lines = csv::lines(text);
  if (lines.empty() || lines.front().text != "site_density_per_km2,se_density_bps_hz_km2")
    throw DomainError(std::string(source) +
                      ": expected header site_density_per_km2,se_density_bps_hz_km2");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = csv::split(lines[i].text);
    std::optional<double> d, v;
    if (cells.size() == 2) {
      d = csv::to_double(cells[0]);
      v = csv::to_double(cells[1]);
    }
    if (!d || !v)
      throw DomainError(std::string(source) + ":" + std::to_string(lines[i].number) +
                        ": expected two numbers");
    t.rows.push_back({*d, *v, 0.0, false});
  }
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string(source) + ": " + e.what());
  }
  return t;
}

void LookupSet::insert(CapacityLookup lookup) {
  auto key = std::make_pair(lookup.frequency_mhz, lookup.reliability_pct);
  tables_.insert_or_assign(key, std::move(lookup));
}

const CapacityLookup* LookupSet::find(double frequency_mhz, double reliability_pct) const {
  auto it = tables_.find({frequency_mhz, reliability_pct});
  return it == tables_.end() ? nullptr : &it->second;
}

std::vector<CapacityLookup> LookupSet::for_portfolio(std::span<const SpectrumBand> portfolio,
                                                     double reliability_pct) const {
  std::vector<CapacityLookup> out;
  for (const auto& band : portfolio) {
    const auto* t = find(band.frequency_mhz, reliability_pct);
    if (!t)
      throw DomainError("no capacity lookup for " + format_double(band.frequency_mhz) +
                        " MHz at " + format_double(reliability_pct) + "% reliability");
    out.push_back(*t);
  }
  return out;
}

LookupSet LookupSet::load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("lookup directory not found: " + dir.string());
  static const std::regex kName(R"(lookup_([0-9.eE+-]+)_([0-9.eE+-]+)\.csv)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, kName)) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  LookupSet set;
  for (const auto& p : files) {
    std::smatch m;
    const auto name = p.filename().string();
    std::regex_match(name, m, kName);
    auto f = csv::to_double(m[1].str());
    auto r = csv::to_double(m[2].str());
    if (!f || !r) throw DomainError(name + ": cannot parse frequency/reliability from file name");
    set.insert(parse_lookup_csv(io::read_file(p), *f, *r, name));
  }
  return set;
}

std::vector<fs::path> LookupSet::write_directory(const fs::path& dir) const {
  std::vector<fs::path> written;
  for (const auto& [key, table] : tables_) {
    std::ostringstream os;
    write_lookup_csv(os, table);
    const auto path = dir / lookup_file_name(key.first, key.second);
    io::write_file_atomic(path, os.str());
    written.push_back(path);
  }
  return written;
}

void ensure_lookups(LookupSet& set, std::span<const std::pair<double, double>> pairs,
                    const SimConfig& config, unsigned jobs, const fs::path& cache_dir) {
  const fs::path cache = cache_dir.empty() ? fs::path{} : cache_dir / config.hash();
  std::vector<double> freqs, rels;
  for (const auto& [f, r] : pairs) {
    if (set.contains(f, r)) continue;
    if (!cache.empty()) {
      const auto path = cache / lookup_file_name(f, r);
      if (fs::exists(path)) {
        set.insert(parse_lookup_csv(io::read_file(path), f, r, path.filename().string()));
        continue;
      }
    }
    if (std::find(freqs.begin(), freqs.end(), f) == freqs.end()) freqs.push_back(f);
    if (std::find(rels.begin(), rels.end(), r) == rels.end()) rels.push_back(r);
  }
  if (freqs.empty()) return;
  std::sort(freqs.begin(), freqs.end());
  std::sort(rels.begin(), rels.end());
  LookupSet fresh;
  for (auto& t : build_lookups(freqs, rels, config, jobs)) {
    if (!set.contains(t.frequency_mhz, t.reliability_pct)) {
      fresh.insert(t);
      set.insert(std::move(t));
    }
  }
  if (!cache.empty()) fresh.write_directory(cache);
}

AreaCapacity area_capacity(double site_density, std::span<const SpectrumBand> portfolio,
                           std::span<const CapacityLookup> lookups) {
  AreaCapacity out;
  for (const auto& band : portfolio) {
    auto it = std::find_if(lookups.begin(), lookups.end(), [&](const CapacityLookup& t) {
      return t.frequency_mhz == band.frequency_mhz;
    });
    if (it == lookups.end())
      throw DomainError("area_capacity: no lookup for " + format_double(band.frequency_mhz) + " MHz");
    bool clamped = false;
    out.mbps_per_km2 += it->value_at(site_density, &clamped) * band.bandwidth_mhz;
    out.clamped = out.clamped || clamped;
  }
  return out;
}

}  // namespace ubcost
