#include "ubcost/types.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace ubcost {

std::string_view to_string(IncomeGroup g) {
  switch (g) {
    case IncomeGroup::AE: return "AE";
    case IncomeGroup::EME: return "EME";
    case IncomeGroup::LIDC: return "LIDC";
  }
  return "?";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::AE_region: return "AE-region";
    case Region::CCA: return "CCA";
    case Region::EDA: return "EDA";
    case Region::EDE: return "EDE";
    case Region::LAC: return "LAC";
    case Region::MENAP: return "MENAP";
    case Region::SSA: return "SSA";
  }
  return "?";
}

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::ICT: return "ICT";
    case Sector::Logistics: return "logistics";
    case Sector::Construction: return "construction";
  }
  return "?";
}

std::optional<IncomeGroup> parse_income_group(std::string_view s) {
  for (auto g : kIncomeGroups)
    if (to_string(g) == s) return g;
  return std::nullopt;
}

std::optional<Region> parse_region(std::string_view s) {
  for (auto r : kRegions)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<Sector> parse_sector(std::string_view s) {
  for (auto sec : {Sector::ICT, Sector::Logistics, Sector::Construction})
    if (to_string(sec) == s) return sec;
  return std::nullopt;
}

Cents Cents::from_usd(double usd) {
  if (!std::isfinite(usd)) throw DomainError("non-finite money amount");
  return Cents(std::llround(usd * 100.0));
}

std::string format_usd(Cents c) {
  const std::int64_t v = c.value();
  const std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  std::string out = v < 0 ? "-" : "";
  out += std::to_string(mag / 100);
  out += '.';
  const auto frac = mag % 100;
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace ubcost
