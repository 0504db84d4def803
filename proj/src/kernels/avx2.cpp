// Built with -mavx2 and only called after a runtime CPU check.

#include <immintrin.h>

#include "detmath.hpp"
#include "kernel_variants.hpp"
#include "scalar_impl.hpp"

namespace ubcost::kernels::avx2 {

namespace {

using detail::kExpCoeff;
using detail::kLogCoeff;

// 1.5 · 2^52: adding it to a small integral double leaves the integer in
// the low mantissa bits.
inline __m256d round_magic() { return _mm256_set1_pd(6755399441055744.0); }
inline __m256d two52() { return _mm256_set1_pd(4503599627370496.0); }

inline __m256d exp2_pd(__m256d x) {
  x = _mm256_min_pd(x, _mm256_set1_pd(detail::kExp2Clamp));
  x = _mm256_max_pd(x, _mm256_set1_pd(-detail::kExp2Clamp));
  const __m256d n = _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d g = _mm256_mul_pd(_mm256_sub_pd(x, n), _mm256_set1_pd(detail::kLn2));
  __m256d p = _mm256_set1_pd(kExpCoeff[0]);
  for (int k = 1; k < 14; ++k) p = _mm256_add_pd(_mm256_mul_pd(p, g), _mm256_set1_pd(kExpCoeff[k]));

  const __m256d magic = round_magic();
  const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                      _mm256_castpd_si256(magic));
  const __m256i ebits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(ebits));
}

inline __m256d log2_pd(__m256d x) {
  const __m256d inf_mask =
      _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::infinity()), _CMP_EQ_OQ);
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
  const __m256d t52 = two52();
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(t52))), t52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(detail::kMantissaMask)),
                      _mm256_set1_epi64x(detail::kOneBits)));

  const __m256d high = _mm256_cmp_pd(m, _mm256_set1_pd(detail::kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), high);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), high);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d s = _mm256_set1_pd(kLogCoeff[0]);
  for (int k = 1; k < 11; ++k) s = _mm256_add_pd(_mm256_mul_pd(s, z2), _mm256_set1_pd(kLogCoeff[k]));
  const __m256d t = _mm256_mul_pd(z, s);
  const __m256d r =
      _mm256_add_pd(e, _mm256_mul_pd(_mm256_add_pd(t, t), _mm256_set1_pd(detail::kInvLn2)));
  return _mm256_blendv_pd(r, x, inf_mask);
}

inline __m256d received_pd(__m256d rx, __m256d dx, __m256d dy, __m256d min_d2, __m256d shadow_db) {
  __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
  d2 = _mm256_max_pd(d2, min_d2);
  const __m256d shadow =
      exp2_pd(_mm256_mul_pd(shadow_db, _mm256_set1_pd(detail::kNegLog2TenOverTen)));
  return _mm256_div_pd(_mm256_mul_pd(rx, shadow), d2);
}

}  // namespace

double exp2(double x) {
  alignas(32) double out[4];
  _mm256_store_pd(out, exp2_pd(_mm256_set1_pd(x)));
  return out[0];
}

double log2(double x) {
  alignas(32) double out[4];
  _mm256_store_pd(out, log2_pd(_mm256_set1_pd(x)));
  return out[0];
}

void sinr(const InterfererLayout& layout, const LinkConstants& link,
          std::span<const double> user_x, std::span<const double> user_y,
          std::span<const double> shadow_db, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d rx = _mm256_set1_pd(link.rx_mw_at_1km);
  const __m256d min_d2 = _mm256_set1_pd(link.min_distance_km * link.min_distance_km);
  const __m256d noise = _mm256_set1_pd(link.noise_mw);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ux = _mm256_loadu_pd(user_x.data() + i);
    const __m256d uy = _mm256_loadu_pd(user_y.data() + i);
    const __m256d signal = received_pd(rx, ux, uy, min_d2, _mm256_loadu_pd(shadow_db.data() + i));
    __m256d interference = _mm256_setzero_pd();
    for (int k = 0; k < layout.count; ++k) {
      const __m256d dx = _mm256_sub_pd(ux, _mm256_set1_pd(layout.x[k]));
      const __m256d dy = _mm256_sub_pd(uy, _mm256_set1_pd(layout.y[k]));
      const double* row = shadow_db.data() + (static_cast<std::size_t>(k) + 1) * n + i;
      interference = _mm256_add_pd(interference, received_pd(rx, dx, dy, min_d2, _mm256_loadu_pd(row)));
    }
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(signal, _mm256_add_pd(interference, noise)));
  }
  for (; i < n; ++i) out[i] = detail::sinr_one(layout, link, user_x[i], user_y[i], shadow_db, n, i);
}

void spectral_efficiency(std::span<const double> sinr, double beta, double se_max,
                         std::span<double> se) {
  const std::size_t n = sinr.size();
  const __m256d vbeta = _mm256_set1_pd(beta);
  const __m256d vmax = _mm256_set1_pd(se_max);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_add_pd(one, _mm256_loadu_pd(sinr.data() + i));
    const __m256d v = _mm256_mul_pd(vbeta, log2_pd(x));
    _mm256_storeu_pd(se.data() + i, _mm256_min_pd(v, vmax));
  }
  for (; i < n; ++i) se[i] = detail::se_one(sinr[i], beta, se_max);
}

}  // namespace ubcost::kernels::avx2
