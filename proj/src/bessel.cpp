#include "trigamma/bessel.hpp"

#include <cmath>
#include <limits>

#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"

namespace trigamma {
namespace {

double j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1} from a start order well past
// the turning point, normalized with J_0 + 2 sum_k J_{2k} = 1.
double j0_miller(double x) {
  const int start = 2 * static_cast<int>((x + 40.0) / 2.0) + 2;
  double next = 0.0;
  double current = 1e-30;
  double norm = 0.0;
  for (int n = start; n > 0; --n) {
    if (n % 2 == 0) norm += 2.0 * current;
    const double prev = 2.0 * n / x * current - next;
    next = current;
    current = prev;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += current;
  return current / norm;
}

double j0_hankel(double x) {
  // For order zero a_k = (-1)^k prod_{j=1..k} (2j-1)^2 / (k! 8^k),
  // P = sum (-1)^j a_{2j} x^{-2j}, Q = sum (-1)^j a_{2j+1} x^{-2j-1}. `term` is |a_k| x^{-k}.
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= odd * odd / (8.0 * k * x);
    }
    if (std::abs(term) > last) break;
    last = std::abs(term);
    const bool negative = ((k / 2) % 2 == 1) != (k % 2 == 1);
    const double signed_term = negative ? -term : term;
    (k % 2 == 0 ? p : q) += signed_term;
    if (std::abs(term) < 1e-18) break;
  }
  const double chi = x - units::pi / 4;
  return std::sqrt(2.0 / (units::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (std::isnan(x)) return x;
  if (x <= 8.0) return j0_series(x);
  if (x <= 60.0) return j0_miller(x);
  if (std::isinf(x)) return 0.0;
  return j0_hankel(x);
}

double bessel_j0_asymptotic(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_j0_asymptotic: x must be > 0");
  return std::sqrt(2.0 / (units::pi * x)) * std::cos(x - units::pi / 4);
}

}  // namespace trigamma
