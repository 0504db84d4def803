#pragma once

#include <span>

#include "ubcost/kernels.hpp"

namespace ubcost::kernels {

namespace scalar {
void sinr(const InterfererLayout& layout, const LinkConstants& link,
          std::span<const double> user_x, std::span<const double> user_y,
          std::span<const double> shadow_db, std::span<double> out);
void spectral_efficiency(std::span<const double> sinr, double beta, double se_max,
                         std::span<double> se);
}  // namespace scalar

#if UBCOST_HAVE_AVX2
namespace avx2 {
void sinr(const InterfererLayout& layout, const LinkConstants& link,
          std::span<const double> user_x, std::span<const double> user_y,
          std::span<const double> shadow_db, std::span<double> out);
void spectral_efficiency(std::span<const double> sinr, double beta, double se_max,
                         std::span<double> se);
double exp2(double x);
double log2(double x);
}  // namespace avx2
#endif

}  // namespace ubcost::kernels
