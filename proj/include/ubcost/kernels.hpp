#pragma once

// Data-parallel inner loops of the Monte Carlo link simulation.
//
// Every variant evaluates the same operations in the same order without
// fused multiply-add, so results are bit-identical across instruction sets.
// The elementary functions exp2_det/log2_det are polynomial evaluations
// shared by all variants for the same reason.

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace ubcost::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view s);

inline constexpr int kMaxInterferers = 6;

/// Co-channel interferer positions relative to the serving site, km.
struct InterfererLayout {
  std::array<double, kMaxInterferers> x{};
  std::array<double, kMaxInterferers> y{};
  int count = 0;
};

struct LinkConstants {
  double rx_mw_at_1km = 0.0;  // received power at 1 km with no shadowing
  double noise_mw = 0.0;
  double min_distance_km = 0.001;
};

/// user_x/user_y: n user positions relative to the serving site (km).
/// shadow_db: (1 + layout.count) rows of n draws; row 0 is the serving link.
/// sinr: n linear outputs.
using SinrKernel = void (*)(const InterfererLayout& layout, const LinkConstants& link,
                            std::span<const double> user_x, std::span<const double> user_y,
                            std::span<const double> shadow_db, std::span<double> sinr);

/// se[i] = min(se_max, beta · log2(1 + sinr[i])).
using SpectralEfficiencyKernel = void (*)(std::span<const double> sinr, double beta,
                                          double se_max, std::span<double> se);

struct KernelTable {
  Isa isa;
  SinrKernel sinr;
  SpectralEfficiencyKernel spectral_efficiency;
};

bool isa_supported(Isa isa);
/// Throws std::invalid_argument when the ISA is unavailable on this CPU or build.
const KernelTable& kernels_for(Isa isa);

/// Best supported table, unless overridden by override_isa() or the
/// UBCOST_ISA environment variable ("scalar" or "avx2").
const KernelTable& active_kernels();
void override_isa(std::optional<Isa> isa);

double exp2_det(double x);  // clamps x to [-1020, 1020]
double log2_det(double x);  // x positive and normal, or +inf

}  // namespace ubcost::kernels
