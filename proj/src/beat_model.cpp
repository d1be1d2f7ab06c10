#include "trigamma/beat_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trigamma/bessel.hpp"
#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"
#include "trigamma/parallel.hpp"

namespace trigamma {
namespace {

constexpr double kPi = units::pi;
constexpr long kMaxPieces = 1'000'000;

// 2u e^{-u^2/tau0} K(u) on u = sqrt(s); smooth at s = 0 and uniformly oscillating.
struct DecayIntegrand {
  double tau0;
  double root_tau_d;
  double phi0;
  BeatKernel kernel;

  double kernel_value(double u) const {
    switch (kernel) {
      case BeatKernel::Cos2: {
        const double c = std::cos(u / root_tau_d + phi0);
        return c * c;
      }
      case BeatKernel::Bessel: {
        const double j = bessel_j0(u / root_tau_d);
        return j * j;
      }
      case BeatKernel::None: return 1.0;
    }
    return 1.0;
  }

  double operator()(double u) const { return 2.0 * u * std::exp(-u * u / tau0) * kernel_value(u); }

  // Interior split points: cos zeros for Cos2, half-period chunks for Bessel.
  std::vector<double> splits(double u_lo, double u_hi) const {
    std::vector<double> out;
    if (kernel == BeatKernel::None || !std::isfinite(root_tau_d)) return out;
    double first;
    double step = kPi * root_tau_d;
    if (kernel == BeatKernel::Cos2) {
      const double m = std::ceil((u_lo / root_tau_d - kPi / 2 + phi0) / kPi);
      first = (kPi / 2 + m * kPi - phi0) * root_tau_d;
    } else {
      first = std::ceil(u_lo / step) * step;
    }
    const double count = (u_hi - first) / step;
    if (count > kMaxPieces)
      throw ComputationError("beat model: tau_d too small for the integration window (" +
                             std::to_string(count) + " oscillations)");
    for (long m = 0; first + m * step < u_hi; ++m) {
      const double u = first + m * step;
      if (u > u_lo) out.push_back(u);
    }
    return out;
  }
};

DecayIntegrand make_integrand(const BeatParams& p) {
  return {p.tau0, std::sqrt(p.tau_d), std::fmod(p.phi0, kPi), p.kernel};
}

// integral_{s_lo}^{s_hi} e^{-s/tau0} K(s) (s - shift)^power ds, power in {0, 1}.
double integrate_window(const DecayIntegrand& f, double s_lo, double s_hi, int power, double shift,
                        const QuadratureOptions& opt) {
  const double u_lo = std::sqrt(s_lo);
  const double u_hi = std::sqrt(s_hi);
  std::vector<double> edges{u_lo};
  const auto inner = f.splits(u_lo, u_hi);
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(u_hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (power == 0) {
      total += integrate_adaptive(f, edges[i], edges[i + 1], opt).value;
    } else {
      const auto weighted = [&](double u) { return f(u) * (u * u - shift); };
      total += integrate_adaptive(weighted, edges[i], edges[i + 1], opt).value;
    }
  }
  return total;
}

std::vector<double> window_bin_integrals(const DecayIntegrand& f, double t_pump, std::span<const TimeBin> bins,
                                         const QuadratureOptions& opt) {
  std::vector<double> points;
  points.reserve(4 * bins.size());
  for (const auto& b : bins) {
    if (!(b.width > 0.0) || !(b.t_start >= 0.0)) throw DomainError("bin widths must be > 0 and starts >= 0");
    const double end = b.t_start + b.width;
    points.insert(points.end(), {b.t_start, end, b.t_start + t_pump, end + t_pump});
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Elementary intervals carry P0 = int g, P1 = int (s - x_i) g; every bin weight is
  // linear on each of them.
  const std::size_t n_elem = points.empty() ? 0 : points.size() - 1;
  std::vector<double> p0(n_elem), p1(n_elem);
  for (std::size_t i = 0; i < n_elem; ++i) {
    p0[i] = integrate_window(f, points[i], points[i + 1], 0, 0.0, opt);
    p1[i] = integrate_window(f, points[i], points[i + 1], 1, points[i], opt);
  }

  std::vector<double> out(bins.size(), 0.0);
  for (std::size_t j = 0; j < bins.size(); ++j) {
    const double a = bins[j].t_start;
    const double b = a + bins[j].width;
    const auto weight = [&](double s) { return std::max(0.0, std::min(b, s) - std::max(a, s - t_pump)); };
    std::size_t i = std::lower_bound(points.begin(), points.end(), a) - points.begin();
    double sum = 0.0;
    for (; i < n_elem && points[i] < b + t_pump; ++i) {
      const double w0 = weight(points[i]);
      const double slope = (weight(points[i + 1]) - w0) / (points[i + 1] - points[i]);
      sum += w0 * p0[i] + slope * p1[i];
    }
    out[j] = sum;
  }
  return out;
}

}  // namespace

std::string to_string(BeatKernel k) {
  switch (k) {
    case BeatKernel::Cos2: return "cos2";
    case BeatKernel::Bessel: return "bessel";
    case BeatKernel::None: return "none";
  }
  return "unknown";
}

BeatKernel beat_kernel_from_string(const std::string& name) {
  if (name == "cos2") return BeatKernel::Cos2;
  if (name == "bessel") return BeatKernel::Bessel;
  if (name == "none") return BeatKernel::None;
  throw DomainError("unknown beat kernel '" + name + "'");
}

void validate(const BeatParams& p) {
  if (!(p.n0 >= 0.0)) throw DomainError("BeatParams.n0 must be >= 0");
  if (!(p.tau0 > 0.0)) throw DomainError("BeatParams.tau0 must be > 0");
  if (!(p.tau_d > 0.0)) throw DomainError("BeatParams.tau_d must be > 0");
  if (!std::isfinite(p.phi0)) throw DomainError("BeatParams.phi0 must be finite");
  if (!(p.t_pump >= 0.0)) throw DomainError("BeatParams.t_pump must be >= 0");
  if (!(p.background >= 0.0)) throw DomainError("BeatParams.background must be >= 0");
}

double tau_d(double tau0, double f_lm, double mu_n, double xi) {
  if (!(tau0 > 0.0) || !(f_lm > 0.0) || !(mu_n > 0.0) || !(xi > 0.0))
    throw DomainError("tau_d: tau0, f_lm, mu_n and xi must all be > 0");
  return tau0 / (f_lm * mu_n * xi);
}

double count_rate(double t, const BeatParams& p) {
  if (!(t >= 0.0)) throw DomainError("count_rate: t must be >= 0");
  validate(p);
  const DecayIntegrand f = make_integrand(p);
  return p.n0 * std::exp(-t / p.tau0) * f.kernel_value(std::sqrt(t)) + p.background;
}

double count_rate_derivative(double t, const BeatParams& p) {
  if (!(t > 0.0)) throw DomainError("count_rate_derivative: t must be > 0");
  if (p.kernel != BeatKernel::Cos2) throw DomainError("count_rate_derivative: only the cos2 kernel is supported");
  const double psi = std::sqrt(t / p.tau_d) + p.phi0;
  const double c = std::cos(psi);
  return -p.n0 * std::exp(-t / p.tau0) * c * (c / p.tau0 + std::sin(psi) / std::sqrt(t * p.tau_d));
}

std::vector<double> rate_minima(const BeatParams& p, double t_max, int points_per_half_period) {
  validate(p);
  if (p.kernel != BeatKernel::Cos2) throw DomainError("rate_minima: only the cos2 kernel is supported");
  if (!(t_max > 0.0)) throw DomainError("rate_minima: t_max must be > 0");
  if (points_per_half_period < 2) throw DomainError("rate_minima: need >= 2 points per half period");
  const double u_max = std::sqrt(t_max);
  const double du = std::sqrt(p.tau_d) * kPi / points_per_half_period;
  const long steps = std::max<long>(2, static_cast<long>(std::ceil(u_max / du)));
  std::vector<double> out;
  double t_prev = std::pow(u_max / steps * 1e-3, 2);
  double d_prev = count_rate_derivative(t_prev, p);
  for (long i = 1; i <= steps; ++i) {
    const double u = u_max * static_cast<double>(i) / steps;
    const double t = u * u;
    const double d = count_rate_derivative(t, p);
    if (d_prev < 0.0 && d >= 0.0) {
      double lo = t_prev;
      double hi = t;
      for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (count_rate_derivative(mid, p) < 0.0 ? lo : hi) = mid;
      }
      out.push_back(count_rate(lo, p) <= count_rate(hi, p) ? lo : hi);
    }
    t_prev = t;
    d_prev = d;
  }
  return out;
}

double accumulated_intensity(double t, const BeatParams& p, const QuadratureOptions& opt) {
  if (!(t >= 0.0)) throw DomainError("accumulated_intensity: t must be >= 0");
  validate(p);
  if (!(p.t_pump > 0.0)) throw DomainError("accumulated_intensity: t_pump must be > 0");
  const double integral = integrate_window(make_integrand(p), t, t + p.t_pump, 0, 0.0, opt);
  return p.n0 * integral + p.background * p.t_pump;
}

std::vector<std::pair<double, double>> beat_curve(const BeatParams& p, std::span<const double> t_grid,
                                                  const QuadratureOptions& opt) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("beat_curve: grid must be nonnegative");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) throw DomainError("beat_curve: grid must be sorted");
  }
  std::vector<std::pair<double, double>> out(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { out[i] = {t_grid[i], accumulated_intensity(t_grid[i], p, opt)}; });
  return out;
}

std::vector<double> beat_shape_bin_integrals(const BeatParams& p, std::span<const TimeBin> bins,
                                             const QuadratureOptions& opt) {
  validate(p);
  if (!(p.t_pump > 0.0)) throw DomainError("bin integrals need t_pump > 0");
  return window_bin_integrals(make_integrand(p), p.t_pump, bins, opt);
}

std::vector<double> expected_bin_counts(const BeatParams& p, std::span<const TimeBin> bins,
                                        const QuadratureOptions& opt) {
  auto out = beat_shape_bin_integrals(p, bins, opt);
  for (std::size_t j = 0; j < bins.size(); ++j) out[j] = p.n0 * out[j] + p.background * p.t_pump * bins[j].width;
  return out;
}

std::vector<double> expected_kalpha_counts(double kalpha_scale, double tau0, double t_pump,
                                           std::span<const TimeBin> bins, const QuadratureOptions& opt) {
  if (!(kalpha_scale >= 0.0)) throw DomainError("kalpha_scale must be >= 0");
  if (!(tau0 > 0.0)) throw DomainError("tau0 must be > 0");
  if (!(t_pump > 0.0)) throw DomainError("bin integrals need t_pump > 0");
  const DecayIntegrand f{tau0, std::numeric_limits<double>::infinity(), 0.0, BeatKernel::None};
  auto out = window_bin_integrals(f, t_pump, bins, opt);
  for (auto& v : out) v *= kalpha_scale;
  return out;
}

}  // namespace trigamma
