#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ubcost {

enum class IncomeGroup { AE, EME, LIDC };

enum class Region { AE_region, CCA, EDA, EDE, LAC, MENAP, SSA };

enum class Sector { ICT, Logistics, Construction };

std::string_view to_string(IncomeGroup g);
std::string_view to_string(Region r);
std::string_view to_string(Sector s);

std::optional<IncomeGroup> parse_income_group(std::string_view s);
std::optional<Region> parse_region(std::string_view s);
std::optional<Sector> parse_sector(std::string_view s);

inline constexpr IncomeGroup kIncomeGroups[] = {IncomeGroup::AE, IncomeGroup::EME,
                                                IncomeGroup::LIDC};
inline constexpr Region kRegions[] = {Region::AE_region, Region::CCA, Region::EDA,
                                      Region::EDE,       Region::LAC, Region::MENAP,
                                      Region::SSA};

/// One carrier of an operator's spectrum portfolio.
struct SpectrumBand {
  double frequency_mhz = 0.0;
  double bandwidth_mhz = 0.0;
  bool operator==(const SpectrumBand&) const = default;
};

/// Whole US cents. All money that is summed or compared for conservation is
/// carried in this type so that additions are exact.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t v) : value_(v) {}

  /// Rounds a dollar amount to the nearest cent (half away from zero).
  static Cents from_usd(double usd);

  constexpr std::int64_t value() const { return value_; }
  double usd() const { return static_cast<double>(value_) / 100.0; }

  constexpr Cents& operator+=(Cents o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Cents& operator-=(Cents o) {
    value_ -= o.value_;
    return *this;
  }
  friend constexpr Cents operator+(Cents a, Cents b) { return Cents(a.value_ + b.value_); }
  friend constexpr Cents operator-(Cents a, Cents b) { return Cents(a.value_ - b.value_); }
  friend constexpr auto operator<=>(Cents, Cents) = default;

 private:
  std::int64_t value_ = 0;
};

/// Formats cents as a fixed two-decimal dollar string ("-12.05").
std::string format_usd(Cents c);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Domain failure: bad input, violated precondition, unmeetable contract.
/// The CLI maps this to exit status 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment failure: missing file, unwritable directory. Exit status 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ubcost
