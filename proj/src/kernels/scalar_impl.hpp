#pragma once

// Per-element reference kernels. The AVX2 variant reuses these for its
// remainder lanes.

#include <span>

#include "detmath.hpp"
#include "ubcost/kernels.hpp"

namespace ubcost::kernels::detail {

static inline double received_mw(double rx_at_1km, double dx, double dy, double min_d2, double shadow_db) {
  double d2 = dx * dx + dy * dy;
  d2 = d2 > min_d2 ? d2 : min_d2;
  const double shadow = exp2_scalar(shadow_db * kNegLog2TenOverTen);
  return (rx_at_1km * shadow) / d2;
}

static inline double sinr_one(const InterfererLayout& layout, const LinkConstants& link, double ux,
                       double uy, std::span<const double> shadow_db, std::size_t n, std::size_t i) {
  const double min_d2 = link.min_distance_km * link.min_distance_km;
  const double signal = received_mw(link.rx_mw_at_1km, ux, uy, min_d2, shadow_db[i]);
  double interference = 0.0;
  for (int k = 0; k < layout.count; ++k) {
    const double p = received_mw(link.rx_mw_at_1km, ux - layout.x[k], uy - layout.y[k], min_d2,
                                 shadow_db[(static_cast<std::size_t>(k) + 1) * n + i]);
    interference = interference + p;
  }
  return signal / (interference + link.noise_mw);
}

static inline double se_one(double sinr, double beta, double se_max) {
  const double se = beta * log2_scalar(1.0 + sinr);
  return se < se_max ? se : se_max;
}

}  // namespace ubcost::kernels::detail
