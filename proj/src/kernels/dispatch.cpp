#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "detmath.hpp"
#include "kernel_variants.hpp"
#include "ubcost/kernels.hpp"

namespace ubcost::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::scalar, &scalar::sinr, &scalar::spectral_efficiency};
#if UBCOST_HAVE_AVX2
constexpr KernelTable kAvx2Table{Isa::avx2, &avx2::sinr, &avx2::spectral_efficiency};
#endif

// -1: no override, otherwise the Isa value.
std::atomic<int> g_override{-1};

Isa best_supported() {
  if (const char* env = std::getenv("UBCOST_ISA")) {
    if (auto isa = parse_isa(env); isa && isa_supported(*isa)) return *isa;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

std::optional<Isa> parse_isa(std::string_view s) {
  if (s == "scalar") return Isa::scalar;
  if (s == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if UBCOST_HAVE_AVX2
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa))
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
#if UBCOST_HAVE_AVX2
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active_kernels() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return kernels_for(static_cast<Isa>(forced));
  static const Isa best = best_supported();
  return kernels_for(best);
}

void override_isa(std::optional<Isa> isa) {
  if (isa && !isa_supported(*isa))
    throw std::invalid_argument("kernel variant '" + std::string(to_string(*isa)) +
                                "' is not available on this machine");
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

double exp2_det(double x) { return detail::exp2_scalar(x); }
double log2_det(double x) { return detail::log2_scalar(x); }

}  // namespace ubcost::kernels
