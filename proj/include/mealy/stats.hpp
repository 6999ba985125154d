#pragma once

#include <cstdint>
#include <string>

namespace mealy {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Wilson score interval for `successes` out of `trials` (trials > 0).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

/// Non-negative fraction kept in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  bool operator==(const Rational&) const = default;
};

}  // namespace mealy
