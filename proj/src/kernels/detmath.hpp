#pragma once

// Polynomial exp2/log2 shared by every kernel variant. The vector versions
// in avx2.cpp mirror these operation for operation; compile with
// -ffp-contract=off so no multiply-add gets fused.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ubcost::kernels::detail {

inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kInvLn2 = 1.44269504088896340735992468100189214;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
// 10^(-dB/10) = 2^(dB · kNegLog2TenOverTen)
inline constexpr double kNegLog2TenOverTen = -0.332192809488736234787031942948939018;
inline constexpr double kExp2Clamp = 1020.0;

// 1/k!, k = 13 .. 0, for e^g on |g| <= ln2/2.
inline constexpr double kExpCoeff[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
    1.0,                1.0};

// 1/(2k+1), k = 10 .. 0, for atanh series ln m = 2 z Σ z^{2k}/(2k+1).
inline constexpr double kLogCoeff[] = {1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0,
                                       1.0 / 13.0, 1.0 / 11.0, 1.0 / 9.0,  1.0 / 7.0,
                                       1.0 / 5.0,  1.0 / 3.0,  1.0};

inline constexpr std::uint64_t kMantissaMask = 0x000fffffffffffffULL;
inline constexpr std::uint64_t kOneBits = 0x3ff0000000000000ULL;

static inline double exp2_scalar(double x) {
  x = x > kExp2Clamp ? kExp2Clamp : x;
  x = x < -kExp2Clamp ? -kExp2Clamp : x;
  const double n = std::nearbyint(x);
  const double g = (x - n) * kLn2;
  double p = kExpCoeff[0];
  for (int k = 1; k < 14; ++k) p = p * g + kExpCoeff[k];
  const auto e = static_cast<std::uint64_t>(static_cast<std::int64_t>(n) + 1023) << 52;
  return p * std::bit_cast<double>(e);
}

static inline double log2_scalar(double x) {
  if (!(x < std::numeric_limits<double>::infinity())) return x;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  double e = static_cast<double>((bits >> 52) & 0x7ff) - 1023.0;
  double m = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
  if (m > kSqrt2) {
    m = m * 0.5;
    e = e + 1.0;
  }
  const double z = (m - 1.0) / (m + 1.0);
  const double z2 = z * z;
  double s = kLogCoeff[0];
  for (int k = 1; k < 11; ++k) s = s * z2 + kLogCoeff[k];
  const double t = z * s;
  return e + (t + t) * kInvLn2;
}

}  // namespace ubcost::kernels::detail
