#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "ubcost/kernels.hpp"

using namespace ubcost::kernels;

namespace {

struct Batch {
  InterfererLayout layout;
  LinkConstants link;
  std::vector<double> x, y, shadow;
};

Batch random_batch(std::size_t n, int ring, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::normal_distribution<double> g(0.0, 10.0);
  Batch b;
  b.layout.count = ring;
  for (int k = 0; k < ring; ++k) {
    const double a = k * 3.14159265358979 / 3.0;
    b.layout.x[k] = 1.1 * std::cos(a);
    b.layout.y[k] = 1.1 * std::sin(a);
  }
  b.link = {3.7e-6, 1.2e-11, 0.001};
  for (std::size_t i = 0; i < n; ++i) {
    b.x.push_back(u(rng));
    b.y.push_back(u(rng));
  }
  // Include an exact co-location to hit the minimum-distance clamp.
  if (n > 0) b.x[0] = b.y[0] = 0.0;
  for (std::size_t i = 0; i < n * (1 + ring); ++i) b.shadow.push_back(g(rng));
  return b;
}

std::vector<double> run_sinr(const KernelTable& t, const Batch& b) {
  std::vector<double> out(b.x.size());
  t.sinr(b.layout, b.link, b.x, b.y, b.shadow, out);
  return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Straight dB-domain evaluation with the standard library.
double sinr_db_oracle(const Batch& b, std::size_t i) {
  const std::size_t n = b.x.size();
  const double base_dbm = 10.0 * std::log10(b.link.rx_mw_at_1km);
  auto rx = [&](double dx, double dy, double s) {
    const double d = std::max(std::hypot(dx, dy), b.link.min_distance_km);
    return std::pow(10.0, (base_dbm - 20.0 * std::log10(d) - s) / 10.0);
  };
  const double sig = rx(b.x[i], b.y[i], b.shadow[i]);
  double intf = 0.0;
  for (int k = 0; k < b.layout.count; ++k)
    intf += rx(b.x[i] - b.layout.x[k], b.y[i] - b.layout.y[k], b.shadow[(k + 1) * n + i]);
  return sig / (intf + b.link.noise_mw);
}

}  // namespace

TEST_CASE("deterministic exp2 and log2 track the standard library") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(-60.0, 60.0), ul(-30.0, 30.0);
  double worst_e = 0.0, worst_l = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = ux(rng);
    worst_e = std::max(worst_e, std::abs(exp2_det(x) - std::exp2(x)) / std::exp2(x));
    const double v = std::exp2(ul(rng));
    worst_l = std::max(worst_l, std::abs(log2_det(v) - std::log2(v)));
  }
  CHECK(worst_e < 4e-16);
  CHECK(worst_l < 4e-15);
  CHECK(exp2_det(0.0) == 1.0);
  CHECK(exp2_det(10.0) == 1024.0);
  CHECK(log2_det(1.0) == 0.0);
  CHECK(log2_det(8.0) == 3.0);
  CHECK(std::isinf(log2_det(std::numeric_limits<double>::infinity())));
  CHECK(std::isfinite(exp2_det(5000.0)));
  CHECK(exp2_det(-5000.0) > 0.0);
}

TEST_CASE("scalar SINR matches a dB-domain oracle") {
  for (int ring : {0, 1, 6}) {
    const auto b = random_batch(1000, ring, 40 + ring);
    const auto s = run_sinr(kernels_for(Isa::scalar), b);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double o = sinr_db_oracle(b, i);
      CHECK(std::abs(s[i] - o) <= 1e-12 * o);
    }
  }
}

TEST_CASE("without interferers SINR is SNR") {
  auto b = random_batch(8, 0, 3);
  std::fill(b.shadow.begin(), b.shadow.end(), 0.0);
  b.x[1] = 0.5;
  b.y[1] = 0.0;
  const auto s = run_sinr(kernels_for(Isa::scalar), b);
  CHECK(s[1] == doctest::Approx(b.link.rx_mw_at_1km / 0.25 / b.link.noise_mw).epsilon(1e-13));
}

TEST_CASE("spectral efficiency saturates and floors") {
  const std::vector<double> sinr{0.0, 1.0, 3.0, 1e9, std::numeric_limits<double>::infinity()};
  std::vector<double> se(sinr.size());
  kernels_for(Isa::scalar).spectral_efficiency(sinr, 0.75, 4.4, se);
  CHECK(se[0] == 0.0);
  CHECK(se[1] == doctest::Approx(0.75));
  CHECK(se[2] == doctest::Approx(1.5));
  CHECK(se[3] == 4.4);
  CHECK(se[4] == 4.4);
}

TEST_CASE("AVX2 kernels are bit-identical to scalar, tails included") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& sc = kernels_for(Isa::scalar);
  const auto& vx = kernels_for(Isa::avx2);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u, 4099u}) {
    for (int ring : {0, 1, 6}) {
      const auto b = random_batch(n, ring, 1000 * n + ring);
      const auto a = run_sinr(sc, b), v = run_sinr(vx, b);
      CHECK_MESSAGE(same_bits(a, v), "n=" << n << " ring=" << ring);

      std::vector<double> se_a(n), se_v(n);
      sc.spectral_efficiency(a, 0.75, 4.4, se_a);
      vx.spectral_efficiency(a, 0.75, 4.4, se_v);
      CHECK(same_bits(se_a, se_v));
    }
  }
  // Extreme inputs through the SE kernel.
  const std::vector<double> odd{0.0, 1e-300, 5e-324, 1e300, std::numeric_limits<double>::infinity(),
                                0.5, 2.0};
  std::vector<double> a(odd.size()), v(odd.size());
  sc.spectral_efficiency(odd, 1.0, 1e9, a);
  vx.spectral_efficiency(odd, 1.0, 1e9, v);
  CHECK(same_bits(a, v));
}

TEST_CASE("dispatch override") {
  override_isa(Isa::scalar);
  CHECK(active_kernels().isa == Isa::scalar);
  if (isa_supported(Isa::avx2)) {
    override_isa(Isa::avx2);
    CHECK(active_kernels().isa == Isa::avx2);
  } else {
    CHECK_THROWS_AS(override_isa(Isa::avx2), std::invalid_argument);
    CHECK_THROWS_AS(kernels_for(Isa::avx2), std::invalid_argument);
  }
  override_isa(std::nullopt);
  CHECK(isa_supported(active_kernels().isa));
  CHECK(parse_isa("avx2") == Isa::avx2);
  CHECK(parse_isa("scalar") == Isa::scalar);
  CHECK_FALSE(parse_isa("neon"));
  CHECK(to_string(Isa::avx2) == "avx2");
}
