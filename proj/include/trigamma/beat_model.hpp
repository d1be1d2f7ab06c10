#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trigamma/quadrature.hpp"

namespace trigamma {

/// Time kernel multiplying the e^{-t/tau0} decay.
enum class BeatKernel {
  Cos2,    ///< cos^2(sqrt(t/tau_d) + phi0), the asymptotic beat used by default
  Bessel,  ///< J0^2(sqrt(t/tau_d)), the full dynamical-beat factor (phi0 ignored)
  None,    ///< plain exponential decay (the K-alpha channel)
};

std::string to_string(BeatKernel k);
BeatKernel beat_kernel_from_string(const std::string& name);

/// Parameters of the pumped beat model. n0 is the rate per unit pump time, so
/// accumulated_intensity() is a count rate in counts/s.
struct BeatParams {
  double n0 = 1.0;
  double tau0 = 4857.0;
  double tau_d = 4857.0;
  double phi0 = 0.0;
  double t_pump = 3600.0;
  double background = 0.0;
  BeatKernel kernel = BeatKernel::Cos2;
};

void validate(const BeatParams& p);

/// Beat time constant tau0 / (f_lm mu_n xi).
double tau_d(double tau0, double f_lm, double mu_n, double xi);

/// Instantaneous rate n0 e^{-t/tau0} K(t) + background; K is cos^2(sqrt(t/tau_d) + phi0)
/// for the default kernel.
double count_rate(double t, const BeatParams& p);

/// d/dt of count_rate for the cos2 kernel (the background drops out); t must be > 0.
double count_rate_derivative(double t, const BeatParams& p);

/// Local minima of count_rate in (0, t_max], located as sign changes of the
/// derivative on a grid uniform in sqrt(t) and bisected to machine precision.
std::vector<double> rate_minima(const BeatParams& p, double t_max, int points_per_half_period = 16);

/// n0 * integral_t^{t+T_p} e^{-s/tau0} K(s) ds + background * T_p.
/// Evaluated in u = sqrt(s), split at the kernel's zeros, adaptive Gauss-Kronrod per piece.
double accumulated_intensity(double t, const BeatParams& p, const QuadratureOptions& opt = {});

/// accumulated_intensity over a sorted, nonnegative time grid.
std::vector<std::pair<double, double>> beat_curve(const BeatParams& p, std::span<const double> t_grid,
                                                  const QuadratureOptions& opt = {});

struct TimeBin {
  double t_start = 0.0;
  double width = 0.0;
};

/// Expected counts integral_bin I(t) dt for each bin. Computed as one integral over
/// s of the decay kernel weighted by |bin ∩ [s - T_p, s]|, so no nested quadrature.
std::vector<double> expected_bin_counts(const BeatParams& p, std::span<const TimeBin> bins,
                                        const QuadratureOptions& opt = {});

/// Same with n0 = 1 and no background: the shape that n0 multiplies.
std::vector<double> beat_shape_bin_integrals(const BeatParams& p, std::span<const TimeBin> bins,
                                             const QuadratureOptions& opt = {});

/// K-alpha expectations: beat-free decay with the same lifetime and pump window.
std::vector<double> expected_kalpha_counts(double kalpha_scale, double tau0, double t_pump,
                                           std::span<const TimeBin> bins, const QuadratureOptions& opt = {});

}  // namespace trigamma
