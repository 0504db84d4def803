#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ubcost/kernels.hpp"
#include "ubcost/types.hpp"

namespace ubcost {

/// Parameters of the Monte Carlo link simulation that produces capacity
/// lookup tables. Link-budget scalars are engine defaults.
struct SimConfig {
  std::size_t iterations = 10000;
  std::uint64_t rng_seed = 42;
  double shadow_mu_db = 2.0;
  double shadow_sigma_db = 10.0;
  int cells_per_site = 3;
  double se_attenuation = 0.75;  // beta applied to the Shannon bound
  double se_max_bps_hz = 8.0;
  int interferer_ring = 6;
  double ue_noise_figure_db = 7.0;
  double tx_power_dbm = 40.0;
  double antenna_gain_dbi = 16.0;
  double thermal_noise_dbm_hz = -174.0;
  double channel_bandwidth_mhz = 10.0;  // noise bandwidth
  double min_distance_km = 0.001;
  bool include_noise = true;
  // Positive, strictly increasing; the zero row is implicit.
  std::vector<double> density_grid;
  // Enumeration used by the lookup subcommand; empty means "from dataset".
  std::vector<double> frequencies_mhz;
  std::vector<double> reliabilities_pct;

  SimConfig();
  void validate() const;  // throws DomainError
  /// Physics-only canonical text: every field that influences a table value.
  std::string canonical() const;
  /// Short hex digest of canonical().
  std::string hash() const;
};

/// 12 log-spaced densities from 0.001 to 10 sites/km².
std::vector<double> default_density_grid();

SimConfig parse_sim_config(std::string_view yaml_text, std::string_view source = "sim config");
SimConfig load_sim_config(const std::filesystem::path& path);
std::string sim_config_keys_help();

/// Free-space path loss in dB, distance in km and frequency in MHz.
double path_loss_db(double distance_km, double frequency_mhz);

/// Attenuated, capped Shannon bound.
double sinr_to_se(double sinr_linear, double beta = 0.75, double se_max = 8.0);

/// Hexagonal lattice geometry for a site density (sites/km²).
struct HexLayout {
  double site_area_km2 = 0.0;
  double cell_radius_km = 0.0;  // hexagon circumradius
  double inter_site_distance_km = 0.0;
  kernels::InterfererLayout interferers;
};
HexLayout hex_layout(double site_density, int interferer_ring);

/// Linear SINR draws, one per iteration, for a user uniformly placed in the
/// serving site's hexagon. Deterministic for a fixed seed and independent
/// of the kernel variant.
std::vector<double> simulate_sinr_linear(double site_density, double frequency_mhz,
                                         const SimConfig& config);
/// Same draws in dB.
std::vector<double> simulate_sinr(double site_density, double frequency_mhz,
                                  const SimConfig& config);

/// Value exceeded by `reliability_pct` percent of the sample (linear
/// interpolation between order statistics).
double reliability_percentile(std::vector<double> sample, double reliability_pct);

struct LookupRow {
  double site_density = 0.0;   // sites/km²
  double se_density = 0.0;     // bps/Hz/km²
  double standard_error = 0.0; // batch-means estimate; not serialized
  bool clamped = false;        // raised to keep the column non-decreasing

  bool operator==(const LookupRow& o) const {
    return site_density == o.site_density && se_density == o.se_density;
  }
};

struct CapacityLookup {
  double frequency_mhz = 0.0;
  double reliability_pct = 0.0;
  std::vector<LookupRow> rows;  // density ascending, first row at 0

  /// Linear interpolation; densities above the grid clamp to the last row
  /// and set *clamped.
  double value_at(double site_density, bool* clamped = nullptr) const;
  double max_density() const { return rows.empty() ? 0.0 : rows.back().site_density; }
  bool any_clamped() const;
  void validate() const;  // throws DomainError on a broken invariant

  bool operator==(const CapacityLookup&) const = default;
};

/// Runs the simulation for every (frequency, density) once and derives one
/// table per (frequency, reliability). All reliabilities share the same
/// draws, so a higher reliability never yields a larger value. `jobs`
/// bounds worker threads and never changes the output.
std::vector<CapacityLookup> build_lookups(std::span<const double> frequencies_mhz,
                                          std::span<const double> reliabilities_pct,
                                          const SimConfig& config, unsigned jobs = 1);

/// One table per frequency at a single reliability.
std::vector<CapacityLookup> build_lookup(std::span<const double> frequencies_mhz,
                                         std::span<const double> density_grid,
                                         double reliability_pct, const SimConfig& config,
                                         unsigned jobs = 1);

std::string lookup_file_name(double frequency_mhz, double reliability_pct);
void write_lookup_csv(std::ostream& os, const CapacityLookup& lookup);
CapacityLookup parse_lookup_csv(std::string_view text, double frequency_mhz,
                                double reliability_pct, std::string_view source = "lookup");

/// Tables keyed by (frequency, reliability).
class LookupSet {
 public:
  void insert(CapacityLookup lookup);
  const CapacityLookup* find(double frequency_mhz, double reliability_pct) const;
  bool contains(double frequency_mhz, double reliability_pct) const {
    return find(frequency_mhz, reliability_pct) != nullptr;
  }
  /// Tables for every band of a portfolio, in portfolio order. Throws
  /// DomainError naming the first missing frequency.
  std::vector<CapacityLookup> for_portfolio(std::span<const SpectrumBand> portfolio,
                                            double reliability_pct) const;
  std::size_t size() const { return tables_.size(); }
  auto begin() const { return tables_.begin(); }
  auto end() const { return tables_.end(); }

  /// Reads every lookup_<freq>_<rel>.csv in a directory.
  static LookupSet load_directory(const std::filesystem::path& dir);
  /// Writes one file per table; returns the paths written.
  std::vector<std::filesystem::path> write_directory(const std::filesystem::path& dir) const;

 private:
  std::map<std::pair<double, double>, CapacityLookup> tables_;
};

/// Adds the tables needed for `pairs` (frequency, reliability) to `set`,
/// simulating whatever is missing. With a cache directory, tables are
/// reused from and stored under <cache>/<config hash>/.
void ensure_lookups(LookupSet& set, std::span<const std::pair<double, double>> pairs,
                    const SimConfig& config, unsigned jobs,
                    const std::filesystem::path& cache_dir = {});

struct AreaCapacity {
  double mbps_per_km2 = 0.0;
  bool clamped = false;  // density beyond some table's grid
};

/// Sum over bands of lookup value × bandwidth (MHz), giving Mbps/km².
/// `lookups` must contain one table per portfolio frequency.
AreaCapacity area_capacity(double site_density, std::span<const SpectrumBand> portfolio,
                           std::span<const CapacityLookup> lookups);

}  // namespace ubcost
