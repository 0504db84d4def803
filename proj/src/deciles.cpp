#include "ubcost/deciles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ubcost/ingest.hpp"

namespace ubcost {

std::vector<std::size_t> decile_sizes(std::size_t n) {
  std::vector<std::size_t> sizes(kDecileCount, n / kDecileCount);
  for (std::size_t i = 0; i < n % kDecileCount; ++i) ++sizes[i];
  return sizes;
}

std::vector<Decile> build_deciles(std::span<const AreaRecord> areas) {
  if (areas.empty()) throw DomainError("build_deciles: no areas");
  const auto& iso3 = areas.front().country_iso3;
  for (const auto& a : areas)
    if (a.country_iso3 != iso3)
      throw DomainError("build_deciles: areas of " + iso3 + " and " + a.country_iso3 + " mixed");
  if (areas.size() < static_cast<std::size_t>(kDecileCount))
    throw DomainError("country " + iso3 + " has " + std::to_string(areas.size()) +
                      " statistical areas; at least 10 are needed to form deciles");

  std::vector<const AreaRecord*> order;
  order.reserve(areas.size());
  for (const auto& a : areas) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const AreaRecord* a, const AreaRecord* b) {
    const double da = a->density(), db = b->density();
    if (da != db) return da > db;
    return a->area_id < b->area_id;
  });

  std::vector<Decile> deciles;
  std::size_t next = 0;
  const auto sizes = decile_sizes(areas.size());
  for (int d = 0; d < kDecileCount; ++d) {
    Decile dec;
    dec.country_iso3 = iso3;
    dec.index = d + 1;
    for (std::size_t k = 0; k < sizes[d]; ++k, ++next) {
      dec.population += order[next]->population;
      dec.area_km2 += order[next]->area_km2;
      dec.member_area_ids.push_back(order[next]->area_id);
    }
    deciles.push_back(std::move(dec));
  }
  return deciles;
}

namespace {

// Densest-first walk: how much of `budget` population each decile absorbs
// given what is still uncovered in it.
std::vector<double> covered_walk(std::span<const double> uncovered, double budget) {
  std::vector<double> covered(uncovered.size(), 0.0);
  for (std::size_t i = 0; i < uncovered.size() && budget > 0.0; ++i) {
    covered[i] = std::min(uncovered[i], budget);
    budget -= covered[i];
  }
  return covered;
}

// Integer split of `count` proportional to `weights`, floors first, the
// remainder to the densest decile with a positive weight.
std::vector<long long> proportional_counts(long long count, std::span<const double> weights) {
  std::vector<long long> out(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (count <= 0 || !(sum > 0.0)) return out;
  long long used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = static_cast<long long>(std::floor(static_cast<double>(count) * weights[i] / sum + 1e-9));
    used += out[i];
  }
  // Guard against the epsilon pushing the floors past the total.
  for (std::size_t i = weights.size(); used > count && i-- > 0;) {
    const long long take = std::min(out[i], used - count);
    out[i] -= take;
    used -= take;
  }
  if (used < count) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) {
        out[i] += count - used;
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<DecileAssets> allocate_sites(std::span<const Decile> deciles, long long total_sites,
                                         double coverage_4g_pct, double coverage_2g_pct) {
  if (total_sites < 0) throw DomainError("allocate_sites: negative total_sites");
  if (coverage_4g_pct < 0.0 || coverage_4g_pct > 100.0 || coverage_2g_pct < 0.0 ||
      coverage_2g_pct > 100.0)
    throw DomainError("allocate_sites: coverage outside [0, 100]");

  std::vector<DecileAssets> assets(deciles.size());
  for (std::size_t i = 0; i < deciles.size(); ++i) assets[i].index = deciles[i].index;

  std::vector<double> pop;
  for (const auto& d : deciles) pop.push_back(d.population);
  const double national = std::accumulate(pop.begin(), pop.end(), 0.0);
  const double coverage_max = std::max(coverage_4g_pct, coverage_2g_pct);
  if (total_sites == 0 || !(coverage_max > 0.0) || !(national > 0.0)) return assets;

  // Sites per covered person is taken as uniform, so the 4G layer gets the
  // share of sites matching its share of the covered population.
  const long long sites_4g =
      std::llround(static_cast<double>(total_sites) * coverage_4g_pct / coverage_max);
  const long long sites_non4g = total_sites - sites_4g;

  const auto covered_4g = covered_walk(pop, coverage_4g_pct / 100.0 * national);
  std::vector<double> uncovered(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) uncovered[i] = pop[i] - covered_4g[i];
  const auto covered_2g =
      covered_walk(uncovered, (coverage_max - coverage_4g_pct) / 100.0 * national);

  const auto counts_4g = proportional_counts(sites_4g, covered_4g);
  const auto counts_non4g = proportional_counts(sites_non4g, covered_2g);
  for (std::size_t i = 0; i < assets.size(); ++i) {
    assets[i].existing_4g_sites = counts_4g[i];
    assets[i].existing_non4g_sites = counts_non4g[i];
  }
  return assets;
}

std::vector<DecileAssets> allocate_fiber(std::span<const DecileAssets> assets,
                                         double fiber_backhaul_share_pct) {
  if (fiber_backhaul_share_pct < 0.0 || fiber_backhaul_share_pct > 100.0)
    throw DomainError("allocate_fiber: share outside [0, 100]");
  std::vector<DecileAssets> out(assets.begin(), assets.end());
  long long national = 0;
  for (const auto& a : out) national += a.total_sites();
  long long remaining =
      std::llround(fiber_backhaul_share_pct / 100.0 * static_cast<double>(national));
  for (auto& a : out) {
    a.fiber_backhaul_sites = std::min(a.total_sites(), remaining);
    remaining -= a.fiber_backhaul_sites;
  }
  return out;
}

}  // namespace ubcost
