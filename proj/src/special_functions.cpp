#include "brng/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "brng/error.hpp"

namespace brng {

double erfc(double x) { return std::erfc(x); }

double igamc(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("igamc: a must be positive, got " + std::to_string(a));
  if (!(x >= 0.0)) throw DomainError("igamc: x must be >= 0, got " + std::to_string(x));
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace brng
