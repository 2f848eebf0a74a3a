#include "ostsel/rng.hpp"

#include <cmath>

namespace ostsel {

std::uint64_t Rng::below(std::uint64_t n) {
  // Reject draws from the tail that would wrap unevenly across [0, n).
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - unit();  // (0, 1], keeps log finite
  const double u2 = unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> Rng::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = s * normal();
  const double im = s * normal();
  return {re, im};
}

}  // namespace ostsel
