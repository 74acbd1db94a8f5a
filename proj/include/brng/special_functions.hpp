#pragma once

// P-value primitives of the SP 800-22 formulas.

namespace brng {

/// Complementary error function. Defined for every real x.
double erfc(double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Throws DomainError unless a > 0 and x >= 0 (x = +inf gives 0).
double igamc(double a, double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace brng
