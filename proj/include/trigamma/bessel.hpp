#pragma once

namespace trigamma {

/// Bessel function of the first kind, order zero. Power series for |x| <= 8,
/// Miller backward recurrence up to |x| = 60, Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// Leading asymptotic form sqrt(2 / (pi x)) cos(x - pi/4); x must be > 0.
double bessel_j0_asymptotic(double x);

}  // namespace trigamma
