// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "trigamma/beat_model.hpp"
#include "trigamma/bessel.hpp"
#include "trigamma/config.hpp"
#include "trigamma/fields.hpp"
#include "trigamma/fitting.hpp"
#include "trigamma/lamb_moessbauer.hpp"
#include "trigamma/spectra.hpp"

using namespace trigamma;

namespace {

constexpr double kPi = units::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// (1/pi) int_0^pi cos(x sin phi) dphi by the trapezoid rule, geometrically convergent
double j0_integral(double x) {
  const int n = 4000;
  const double h = kPi / n;
  double s = 0.5 * (1.0 + std::cos(x * std::sin(kPi)));
  for (int i = 1; i < n; ++i) s += std::cos(x * std::sin(i * h));
  return s / n;
}

double midpoint(double t, const BeatParams& p, long n) {
  const double h = p.t_pump / n;
  long double sum = 0.0L;
  for (long i = 0; i < n; ++i) {
    const double s = t + (i + 0.5) * h;
    const double c = std::cos(std::sqrt(s / p.tau_d) + p.phi0);
    sum += std::exp(-s / p.tau0) * c * c;
  }
  return p.n0 * static_cast<double>(sum) * h + p.background * p.t_pump;
}

TriGammaGeometry matched_geometry(LatticeSpec& lattice) {
  const double k = photon_wavenumber(kRhodiumGammaEnergy);
  return build_trigamma(k, bragg_angle_solve(k, lattice).front());
}

Outcome strain_rate() {
  const double r = thermal_strain_rate(default_run_config().rhodium);
  return {r >= 0.5e-12 && r <= 2e-12, fmt("strain rate %.4e /s vs 1e-12 (factor 2)", r)};
}

Outcome doppler() {
  const double v = doppler_speed_per_linewidth(default_run_config().rhodium);
  return {std::abs(v / 1e-15 - 1) <= 0.2, fmt("Doppler speed %.4e m/s vs 1e-15 (20%%)", v)};
}

Outcome linewidth() {
  const double g = natural_linewidth(4857.0);
  return {g >= 1e-19 && g <= 2e-19, fmt("linewidth %.4e eV in [1e-19, 2e-19]", g)};
}

Outcome beat_constant() {
  const auto cfg = default_run_config();
  const double ratio = tau_d(cfg.rhodium.tau0, 0.5, 1.0 / 22e-6, 50e-6) / cfg.rhodium.tau0;
  return {ratio >= 0.5 && ratio <= 1.5, fmt("tau_d/tau0 = %.4f in [0.5, 1.5]", ratio)};
}

Outcome cancellation() {
  LatticeSpec lattice(kRhodiumLatticeConstant);
  const auto geom = matched_geometry(lattice);
  const double r = cancellation_residual(geom, lattice, 1000, 20061017);
  return {r <= 1e-10, fmt("max relative |E| over 1000 sites %.3e (limit 1e-10), theta %.4f deg", r, geom.theta * 180 / kPi)};
}

Outcome enhancement() {
  LatticeSpec lattice(kRhodiumLatticeConstant);
  const auto geom = matched_geometry(lattice);
  double closed_worst = 0.0;
  for (double sigma : {0.0, 1e-30, 1e-25}) closed_worst = std::max(closed_worst, std::abs(flm_closed_form(geom, sigma).value - 9));
  bool mc_ok = true;
  double worst_z = 0.0;
  for (double x : {1e-2, 1e-4, 0.0}) {
    DisplacementEnsemble e;
    e.sigma = x / geom.k_entangled.z();
    e.n_samples = 1'000'000;
    e.seed = 6;
    const auto mc = flm_coherent_mc(geom, e);
    const double diff = std::abs(mc.value - 9 * std::exp(-x * x));
    if (x == 0.0) {
      mc_ok = mc_ok && std::abs(mc.value - 9) <= 1e-12;
    } else {
      worst_z = std::max(worst_z, diff / *mc.std_error);
      mc_ok = mc_ok && diff <= 3 * *mc.std_error;
    }
  }
  return {closed_worst <= 1e-12 && mc_ok,
          fmt("closed form |f-9| %.1e (limit 1e-12); MC worst %.2f stderr, frozen lattice exact", closed_worst, worst_z)};
}

Outcome mc_closed_form() {
  LatticeSpec lattice(kRhodiumLatticeConstant);
  const auto geom = matched_geometry(lattice);
  double worst = 0.0;
  bool ok = true;
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    DisplacementEnsemble e;
    e.sigma = x / geom.k_entangled.z();
    e.n_samples = 1'000'000;
    e.seed = 7;
    const auto mc = flm_coherent_mc(geom, e);
    const double z = std::abs(mc.value - flm_closed_form(geom, e.sigma).value) / *mc.std_error;
    worst = std::max(worst, z);
    ok = ok && z <= 3;
  }
  return {ok, fmt("worst |MC - closed| = %.2f stderr over 4 widths (limit 3)", worst)};
}

Outcome quadrature_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    BeatParams p;
    p.n0 = 0.1 + 10 * u(rng);
    p.tau_d = 4857.0 * std::pow(10.0, -2 + 3 * u(rng));
    p.phi0 = kPi * u(rng);
    p.t_pump = 600 + 6600 * u(rng);
    p.background = 0.01 * u(rng);
    const double t = 5 * 4857.0 * u(rng);
    worst = std::max(worst, std::abs(accumulated_intensity(t, p) / midpoint(t, p, 10'000'000) - 1));
  }
  return {worst <= 1e-6, fmt("worst relative deviation from 1e7-point midpoint %.2e (limit 1e-6)", worst)};
}

Outcome bessel_suite() {
  double worst = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double x = 50.0 * i / 5000;
    worst = std::max(worst, std::abs(bessel_j0(x) - j0_integral(x)));
  }
  const double at5 = std::abs(bessel_j0_asymptotic(5.0) / bessel_j0(5.0) - 1);
  // beyond 20: pointwise ratio away from the zeros, envelope-scaled error everywhere
  double far_pointwise = 0.0, far_envelope = 0.0;
  for (double x = 20.0; x <= 200.0; x += 0.005) {
    const double exact = bessel_j0(x);
    const double env = std::sqrt(2 / (kPi * x));
    const double err = std::abs(bessel_j0_asymptotic(x) - exact);
    far_envelope = std::max(far_envelope, err / env);
    if (std::abs(exact) >= 0.7 * env) far_pointwise = std::max(far_pointwise, err / std::abs(exact));
  }
  const bool ok = worst <= 1e-10 && at5 < 0.05 && far_pointwise < 0.01 && far_envelope < 0.01;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "J0 max abs err %.2e (limit 1e-10); asymptotic rel err %.2f%% at 5, %.3f%% pointwise / %.3f%% of envelope for x>=20",
                worst, 100 * at5, 100 * far_pointwise, 100 * far_envelope);
  return {ok, buf};
}

Outcome lorentz_suite() {
  using Vec3c = Eigen::Matrix<std::complex<double>, 3, 1>;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0, 1);
  std::uniform_real_distribution<double> speed(0, 0.9);
  double round_trip = 0, invariants = 0, longitudinal = 0;
  bool checks = true;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d beta(n(rng), n(rng), n(rng));
    beta *= speed(rng) / beta.norm();
    if (i == 0) beta = 0.9 * beta.normalized();
    FieldStated fs;
    for (int c = 0; c < 3; ++c) {
      fs.E[c] = {n(rng), n(rng)};
      fs.B[c] = {n(rng), n(rng)};
    }
    const auto there = lorentz_transform(fs, beta);
    const auto back = lorentz_transform(there, Eigen::Vector3d(-beta));
    round_trip = std::max({round_trip, (back.E - fs.E).cwiseAbs().maxCoeff(), (back.B - fs.B).cwiseAbs().maxCoeff()});
    const auto [i1, i2] = field_invariants(fs);
    const auto [j1, j2] = field_invariants(there);
    invariants = std::max({invariants, std::abs(i1 - j1), std::abs(i2 - j2)});

    FieldStated lon;
    const std::complex<double> amp(n(rng), n(rng));
    lon.B = amp * beta.normalized().cast<std::complex<double>>();
    lon.E = Vec3c::Zero();
    longitudinal = std::max(longitudinal, (lorentz_transform(lon, beta).B - lon.B).cwiseAbs().maxCoeff());
    checks = checks && longitudinal_B_invariance_check(lon, beta, 1e-12);
  }
  const bool ok = round_trip <= 1e-12 && longitudinal <= 1e-12 && invariants <= 1e-10 && checks;
  return {ok, fmt("round trip %.1e, longitudinal B change %.1e (limits 1e-12), invariants %.1e (limit 1e-10)",
                  round_trip, longitudinal, invariants)};
}

Outcome recovery() {
  BeatParams truth;
  truth.n0 = 0.5;
  truth.tau_d = truth.tau0 / 10;
  truth.phi0 = 0.4;
  truth.t_pump = 1800.0;
  truth.background = 0.01;
  FitConfig cfg;
  cfg.initial = truth;
  int good = 0;
  double min_expected = 1e300, worst_tau = 0, worst_phi = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    const auto sim = simulate_counts(truth, 0.05, {60.0, 36000.0}, 1000 + seed);
    for (double e : sim.gamma_expected) min_expected = std::min(min_expected, e);
    const auto r = fit_beat(sim.gamma, cfg);
    const double dt = std::abs(r.params.tau_d / truth.tau_d - 1);
    double dp = std::fmod(std::abs(r.params.phi0 - truth.phi0), kPi);
    dp = std::min(dp, kPi - dp);
    worst_tau = std::max(worst_tau, dt);
    worst_phi = std::max(worst_phi, dp);
    if (dt < 0.05 && dp < 0.1) ++good;
  }
  const bool ok = good >= 9 && min_expected >= 1e3;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%d/10 seeds within 5%% tau_d and 0.1 rad phi0 (worst %.2f%%, %.3f rad); 600 bins, min expectation %.0f",
                good, 100 * worst_tau, worst_phi, min_expected);
  return {ok, buf};
}

Outcome minima_law() {
  double worst = 0.0;
  bool ok = true;
  for (double phi0 : {0.0, 0.4, 1.0, 1.5}) {
    BeatParams p;
    p.tau_d = 485.7;
    p.phi0 = phi0;
    const double last = p.tau_d * std::pow(kPi / 2 + 5 * kPi - phi0, 2);
    const auto mins = rate_minima(p, 1.05 * last);
    if (mins.size() < 6) {
      ok = false;
      continue;
    }
    for (int m = 0; m <= 5; ++m) {
      const double expect = p.tau_d * std::pow(kPi / 2 + m * kPi - phi0, 2);
      worst = std::max(worst, std::abs(mins[m] - expect) / expect);
    }
  }
  return {ok && worst <= 1e-9, fmt("worst relative minimum offset %.2e over m = 0..5 (limit 1e-9)", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "strain rate estimate", 1, strain_rate},
      {2, "Doppler speed estimate", 1, doppler},
      {3, "linewidth scale", 1, linewidth},
      {4, "beat time constant", 1, beat_constant},
      {5, "field cancellation", 10, cancellation},
      {6, "enhancement factor", 30, enhancement},
      {7, "MC vs closed form", 120, mc_closed_form},
      {8, "quadrature oracle", 120, quadrature_oracle},
      {9, "Bessel suite", 10, bessel_suite},
      {10, "Lorentz suite", 1, lorentz_suite},
      {11, "end-to-end recovery", 300, recovery},
      {12, "beat minima law", 1, minima_law},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s  #%-2d %-24s %s [%.3f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
