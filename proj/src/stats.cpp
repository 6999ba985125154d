#include "mealy/stats.hpp"

#include <cmath>
#include <numeric>

#include "mealy/errors.hpp"

namespace mealy {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw Error(ErrorKind::input_domain, "wilson interval needs at least one trial");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  // The edges are exactly 0 and 1 at the extremes; rounding would leave them off by an ulp.
  const double lower = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lower, upper};
}

Rational::Rational(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw Error(ErrorKind::input_domain, "zero denominator");
  const std::uint64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

}  // namespace mealy
