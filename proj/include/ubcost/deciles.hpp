#pragma once

#include <span>
#include <string>
#include <vector>

namespace ubcost {

struct AreaRecord;

inline constexpr int kDecileCount = 10;

/// One density decile of a country. Index 1 is the densest.
struct Decile {
  std::string country_iso3;
  int index = 0;
  double population = 0.0;
  double area_km2 = 0.0;
  std::vector<std::string> member_area_ids;

  double density() const { return area_km2 > 0.0 ? population / area_km2 : 0.0; }
  bool operator==(const Decile&) const = default;
};

/// Existing infrastructure attributed to a decile.
struct DecileAssets {
  int index = 0;
  long long existing_4g_sites = 0;
  long long existing_non4g_sites = 0;
  long long fiber_backhaul_sites = 0;

  long long total_sites() const { return existing_4g_sites + existing_non4g_sites; }
  bool operator==(const DecileAssets&) const = default;
};

/// Sizes of the ten contiguous groups for n areas: the first n mod 10
/// groups take ceil(n/10), the rest floor(n/10).
std::vector<std::size_t> decile_sizes(std::size_t n);

/// Sorts one country's areas by density (descending, ties by area_id
/// ascending) and splits them into ten near-equal-count deciles.
/// Throws DomainError for fewer than ten areas or mixed countries.
std::vector<Decile> build_deciles(std::span<const AreaRecord> areas);

/// Places existing sites densest-first. 4G sites cover the 4G-covered
/// population; the remaining sites cover the additional population reached
/// by 2G. Within each layer sites are proportional to the covered
/// population of each decile; rounding remainders go to the densest decile
/// that received a share.
std::vector<DecileAssets> allocate_sites(std::span<const Decile> deciles, long long total_sites,
                                         double coverage_4g_pct, double coverage_2g_pct);

/// Marks round(share × allocated sites) sites as fiber fed, densest first.
std::vector<DecileAssets> allocate_fiber(std::span<const DecileAssets> assets,
                                         double fiber_backhaul_share_pct);

}  // namespace ubcost
