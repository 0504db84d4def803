#include "kernel_variants.hpp"
#include "scalar_impl.hpp"

namespace ubcost::kernels::scalar {

void sinr(const InterfererLayout& layout, const LinkConstants& link,
          std::span<const double> user_x, std::span<const double> user_y,
          std::span<const double> shadow_db, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i)
    out[i] = detail::sinr_one(layout, link, user_x[i], user_y[i], shadow_db, n, i);
}

void spectral_efficiency(std::span<const double> sinr, double beta, double se_max,
                         std::span<double> se) {
  for (std::size_t i = 0; i < sinr.size(); ++i) se[i] = detail::se_one(sinr[i], beta, se_max);
}

}  // namespace ubcost::kernels::scalar
