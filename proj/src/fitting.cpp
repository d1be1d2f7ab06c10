#include "trigamma/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "trigamma/constants.hpp"
#include "trigamma/error.hpp"
#include "trigamma/parallel.hpp"

namespace trigamma {
namespace {

constexpr FitParam kCanonical[] = {FitParam::N0, FitParam::TauD, FitParam::Phi0, FitParam::Background};

struct FitData {
  std::vector<TimeBin> bins;
  Eigen::VectorXd y;
  Eigen::VectorXd sigma;
  Eigen::VectorXd divisor;
};

FitData data_from(const CountSeries& series) {
  if (series.bins.empty()) throw StructuralError("fit: empty series");
  validate(series);
  FitData d;
  d.bins = series.time_bins();
  const auto n = static_cast<Eigen::Index>(series.bins.size());
  d.y.resize(n);
  d.sigma.resize(n);
  d.divisor = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = static_cast<double>(series.bins[i].counts);
    d.y[i] = c;
    d.sigma[i] = std::sqrt(std::max(c, 1.0));
  }
  return d;
}

FitData data_from(const RatioSeries& series, const BeatParams& fixed) {
  FitData d;
  std::vector<double> y, sigma;
  for (const auto& b : series.bins) {
    if (!b.valid || !(b.sigma > 0.0)) continue;
    d.bins.push_back({b.t_start, b.width});
    y.push_back(b.ratio);
    sigma.push_back(b.sigma);
  }
  if (d.bins.empty()) throw StructuralError("fit: ratio series has no valid bins");
  d.y = Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  d.sigma = Eigen::Map<Eigen::VectorXd>(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
  const auto k = expected_kalpha_counts(1.0, fixed.tau0, fixed.t_pump, d.bins);
  d.divisor = Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size()));
  return d;
}

// Internal coordinates: n0, s = tau_d^{-1/2}, phi0, background. The model is smooth in
// s down to s = 0 (no beat), which tau_d itself is not.
class Problem {
 public:
  Problem(const FitData& data, const FitConfig& cfg) : data_(data), cfg_(cfg) {
    for (FitParam p : kCanonical)
      if (std::find(cfg.free_params.begin(), cfg.free_params.end(), p) != cfg.free_params.end()) free_.push_back(p);
    background_column_.resize(data.y.size());
    for (Eigen::Index i = 0; i < data.y.size(); ++i)
      background_column_[i] = cfg.initial.t_pump * data.bins[i].width / data.divisor[i];
  }

  const std::vector<FitParam>& free() const { return free_; }
  Eigen::Index n_free() const { return static_cast<Eigen::Index>(free_.size()); }
  Eigen::Index n_obs() const { return data_.y.size(); }

  int index_of(FitParam p) const {
    const auto it = std::find(free_.begin(), free_.end(), p);
    return it == free_.end() ? -1 : static_cast<int>(it - free_.begin());
  }

  Eigen::VectorXd to_internal(const BeatParams& p) const {
    Eigen::VectorXd x(n_free());
    for (Eigen::Index i = 0; i < n_free(); ++i) x[i] = internal_value(free_[i], p);
    return x;
  }

  BeatParams to_params(const Eigen::VectorXd& x) const {
    BeatParams p = cfg_.initial;
    for (Eigen::Index i = 0; i < n_free(); ++i) {
      switch (free_[i]) {
        case FitParam::N0: p.n0 = x[i]; break;
        case FitParam::TauD: p.tau_d = 1.0 / (x[i] * x[i]); break;
        case FitParam::Phi0: p.phi0 = x[i]; break;
        case FitParam::Background: p.background = x[i]; break;
      }
    }
    return p;
  }

  double lower(Eigen::Index i) const { return internal_bounds(free_[i]).lo; }
  double upper(Eigen::Index i) const { return internal_bounds(free_[i]).hi; }

  Eigen::VectorXd clamp(Eigen::VectorXd x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower(i), upper(i));
    return x;
  }

  /// Gamma bin integrals for n0 = 1 divided by the per-bin divisor.
  Eigen::VectorXd shape(double tau_d, double phi0) const {
    BeatParams p = cfg_.initial;
    p.tau_d = tau_d;
    p.phi0 = phi0;
    p.n0 = 1.0;
    p.background = 0.0;
    const auto s = beat_shape_bin_integrals(p, data_.bins);
    return Eigen::Map<const Eigen::VectorXd>(s.data(), n_obs()).cwiseQuotient(data_.divisor);
  }

  Eigen::VectorXd model(const BeatParams& p, const Eigen::VectorXd& shape) const {
    return p.n0 * shape + p.background * background_column_;
  }

  Eigen::VectorXd residual(const BeatParams& p, const Eigen::VectorXd& shape) const {
    return (data_.y - model(p, shape)).cwiseQuotient(data_.sigma);
  }

  double chi2(const BeatParams& p, const Eigen::VectorXd& shape) const { return residual(p, shape).squaredNorm(); }

  /// Weighted linear solve for the free linear parameters (n0, background) at fixed shape.
  void solve_linear(BeatParams& p, const Eigen::VectorXd& shape) const {
    const bool n0_free = index_of(FitParam::N0) >= 0;
    const bool bg_free = index_of(FitParam::Background) >= 0;
    if (!n0_free && !bg_free) return;
    const Eigen::VectorXd a = shape.cwiseQuotient(data_.sigma);
    const Eigen::VectorXd b = background_column_.cwiseQuotient(data_.sigma);
    const Eigen::VectorXd z = data_.y.cwiseQuotient(data_.sigma);
    const auto bn = cfg_.bounds.at(FitParam::N0);
    const auto bb = cfg_.bounds.at(FitParam::Background);
    const auto solve_one = [](const Eigen::VectorXd& col, const Eigen::VectorXd& target, ParamBounds bnd) {
      const double den = col.squaredNorm();
      const double v = den > 0.0 ? col.dot(target) / den : bnd.lo;
      return std::clamp(v, bnd.lo, bnd.hi);
    };
    if (n0_free && bg_free) {
      Eigen::Matrix2d m;
      m << a.squaredNorm(), a.dot(b), a.dot(b), b.squaredNorm();
      const Eigen::Vector2d rhs(a.dot(z), b.dot(z));
      const Eigen::Vector2d sol = m.ldlt().solve(rhs);
      if (sol.allFinite() && sol[0] >= bn.lo && sol[0] <= bn.hi && sol[1] >= bb.lo && sol[1] <= bb.hi) {
        p.n0 = sol[0];
        p.background = sol[1];
        return;
      }
      p.background = std::clamp(sol.allFinite() ? sol[1] : bb.lo, bb.lo, bb.hi);
      p.n0 = solve_one(a, z - p.background * b, bn);
      p.background = solve_one(b, z - p.n0 * a, bb);
    } else if (n0_free) {
      p.n0 = solve_one(a, z - p.background * b, bn);
    } else {
      p.background = solve_one(b, z - p.n0 * a, bb);
    }
  }

  /// Jacobian of the weighted residual; analytic for the linear parameters,
  /// central differences for s and phi0.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& shape) const {
    const BeatParams p = to_params(x);
    Eigen::MatrixXd j(n_obs(), n_free());
    for (Eigen::Index i = 0; i < n_free(); ++i) {
      switch (free_[i]) {
        case FitParam::N0: j.col(i) = -shape.cwiseQuotient(data_.sigma); break;
        case FitParam::Background: j.col(i) = -background_column_.cwiseQuotient(data_.sigma); break;
        case FitParam::TauD: {
          const double s = x[i];
          const double h = 1e-6 * s;
          const Eigen::VectorXd up = this->shape(1.0 / ((s + h) * (s + h)), p.phi0);
          const Eigen::VectorXd down = this->shape(1.0 / ((s - h) * (s - h)), p.phi0);
          j.col(i) = -p.n0 * (up - down).cwiseQuotient(data_.sigma) / (2 * h);
          break;
        }
        case FitParam::Phi0: {
          const double h = 1e-6;
          const Eigen::VectorXd up = this->shape(p.tau_d, p.phi0 + h);
          const Eigen::VectorXd down = this->shape(p.tau_d, p.phi0 - h);
          j.col(i) = -p.n0 * (up - down).cwiseQuotient(data_.sigma) / (2 * h);
          break;
        }
      }
    }
    return j;
  }

 private:
  static double internal_value(FitParam f, const BeatParams& p) {
    switch (f) {
      case FitParam::N0: return p.n0;
      case FitParam::TauD: return 1.0 / std::sqrt(p.tau_d);
      case FitParam::Phi0: return p.phi0;
      case FitParam::Background: return p.background;
    }
    return 0.0;
  }

  ParamBounds internal_bounds(FitParam f) const {
    const ParamBounds b = cfg_.bounds.at(f);
    if (f == FitParam::TauD) return {1.0 / std::sqrt(b.hi), 1.0 / std::sqrt(b.lo)};
    return b;
  }

  const FitData& data_;
  const FitConfig& cfg_;
  std::vector<FitParam> free_;
  Eigen::VectorXd background_column_;
};

struct StartOutcome {
  Eigen::VectorXd x;
  double chi2 = std::numeric_limits<double>::infinity();
  StartDiagnostics diag;
};

StartOutcome run_start(const Problem& prob, const FitConfig& cfg, double phi0_start) {
  StartOutcome out;
  out.diag.phi0_start = phi0_start;
  BeatParams p = cfg.initial;
  if (prob.index_of(FitParam::Phi0) >= 0) p.phi0 = phi0_start;

  // Seed tau_d from a log-spaced scan with the linear parameters solved exactly.
  if (prob.index_of(FitParam::TauD) >= 0) {
    const auto b = cfg.bounds.at(FitParam::TauD);
    double best = std::numeric_limits<double>::infinity();
    BeatParams best_p = p;
    const int n = std::max(1, cfg.tau_d_scan_points);
    for (int i = 0; i < n; ++i) {
      BeatParams trial = p;
      const double f = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
      trial.tau_d = std::exp(std::log(b.lo) + f * (std::log(b.hi) - std::log(b.lo)));
      const Eigen::VectorXd shape = prob.shape(trial.tau_d, trial.phi0);
      prob.solve_linear(trial, shape);
      const double c = prob.chi2(trial, shape);
      if (c < best) {
        best = c;
        best_p = trial;
      }
    }
    p = best_p;
  } else {
    prob.solve_linear(p, prob.shape(p.tau_d, p.phi0));
  }

  Eigen::VectorXd x = prob.clamp(prob.to_internal(p));
  Eigen::VectorXd shape = prob.shape(prob.to_params(x).tau_d, prob.to_params(x).phi0);
  double chi2 = prob.chi2(prob.to_params(x), shape);
  double lambda = 1e-3;
  bool converged = false;
  std::string message = "iteration limit reached";
  int iter = 0;
  for (; iter < cfg.max_iters && !converged; ++iter) {
    const Eigen::VectorXd r = prob.residual(prob.to_params(x), shape);
    const Eigen::MatrixXd j = prob.jacobian(x, shape);
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    Eigen::VectorXd d = a.diagonal();
    const double dmax = std::max(d.maxCoeff(), std::numeric_limits<double>::min());
    d = d.cwiseMax(1e-12 * dmax);
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = a;
      damped.diagonal() += lambda * d;
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      const Eigen::VectorXd x_new = prob.clamp(x + step);
      const BeatParams p_new = prob.to_params(x_new);
      const Eigen::VectorXd shape_new = prob.shape(p_new.tau_d, p_new.phi0);
      const double chi2_new = step.allFinite() ? prob.chi2(p_new, shape_new) : std::numeric_limits<double>::infinity();
      if (chi2_new < chi2) {
        const double rel_step = ((x_new - x).cwiseAbs().cwiseQuotient(x.cwiseAbs().cwiseMax(1e-300))).maxCoeff();
        const double rel_drop = (chi2 - chi2_new) / std::max(chi2, 1e-300);
        x = x_new;
        shape = shape_new;
        chi2 = chi2_new;
        lambda = std::max(lambda / 10, 1e-12);
        accepted = true;
        if (rel_step <= cfg.tolerance) {
          converged = true;
          message = "parameter step below tolerance";
        } else if (rel_drop <= cfg.tolerance && rel_step <= 1e-6) {
          converged = true;
          message = "chi2 decrease below tolerance";
        }
      } else {
        lambda *= 10;
        if (lambda > 1e16) {
          converged = true;
          message = "no further decrease in chi2";
          break;
        }
      }
    }
  }
  out.x = x;
  out.chi2 = chi2;
  out.diag.chi2 = chi2;
  out.diag.iterations = iter;
  out.diag.converged = converged;
  out.diag.message = message;
  return out;
}

double reduce_phase(double phi) {
  double r = std::fmod(phi, units::pi);
  if (r < 0) r += units::pi;
  if (r >= units::pi) r = 0.0;
  return r;
}

FitResult fit(const FitData& data, const FitConfig& cfg) {
  validate(cfg);
  const Problem prob(data, cfg);
  FitResult out;
  out.dof = static_cast<int>(prob.n_obs() - prob.n_free());
  for (FitParam f : prob.free()) out.covariance_names.push_back(to_string(f));

  if (prob.n_free() == 0) {
    out.params = cfg.initial;
    out.chi2 = prob.chi2(cfg.initial, prob.shape(cfg.initial.tau_d, cfg.initial.phi0));
    out.converged = true;
    out.message = "no free parameters";
    out.inv_tau_d = out.inv_tau_d_upper = 1.0 / cfg.initial.tau_d;
    return out;
  }

  std::vector<double> phases;
  if (prob.index_of(FitParam::Phi0) >= 0) {
    for (int k = 0; k < cfg.phase_grid; ++k) phases.push_back(units::pi * k / cfg.phase_grid);
  } else {
    phases.push_back(cfg.initial.phi0);
  }
  std::vector<StartOutcome> outcomes(phases.size());
  parallel_for(phases.size(), [&](std::size_t i) { outcomes[i] = run_start(prob, cfg, phases[i]); }, cfg.threads);

  const int tau_idx = prob.index_of(FitParam::TauD);
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    const double a = outcomes[i].chi2;
    const double b = outcomes[best].chi2;
    const bool tie = std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
    if (tie && tau_idx >= 0) {
      // larger s means lower tau_d
      if (outcomes[i].x[tau_idx] > outcomes[best].x[tau_idx]) best = i;
    } else if (a < b) {
      best = i;
    }
  }
  for (const auto& o : outcomes) out.starts.push_back(o.diag);

  const Eigen::VectorXd& x = outcomes[best].x;
  out.params = prob.to_params(x);
  out.chi2 = outcomes[best].chi2;
  const bool any = std::any_of(outcomes.begin(), outcomes.end(), [](const StartOutcome& o) { return o.diag.converged; });
  out.converged = outcomes[best].diag.converged;
  if (out.converged) {
    out.message = outcomes[best].diag.message;
  } else {
    std::ostringstream msg;
    msg << (any ? "best start did not converge" : "no start converged") << ";";
    for (const auto& o : outcomes) msg << " [phi0=" << o.diag.phi0_start << ": " << o.diag.message << "]";
    out.message = msg.str();
  }

  // Covariance from the Gauss-Newton Hessian, pseudo-inverted so degenerate
  // directions contribute zero instead of blowing up.
  const Eigen::VectorXd shape = prob.shape(out.params.tau_d, out.params.phi0);
  const Eigen::MatrixXd j = prob.jacobian(x, shape);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(j.transpose() * j);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double cutoff = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min()) * 1e-14;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
  const Eigen::MatrixXd cov_internal = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::VectorXd to_reported = Eigen::VectorXd::Ones(prob.n_free());
  if (tau_idx >= 0) to_reported[tau_idx] = -2.0 / std::pow(x[tau_idx], 3);
  out.covariance = to_reported.asDiagonal() * cov_internal * to_reported.asDiagonal();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();

  if (tau_idx >= 0) {
    const double s = x[tau_idx];
    const double sd = std::sqrt(std::max(0.0, cov_internal(tau_idx, tau_idx)));
    out.inv_tau_d = s * s;
    out.inv_tau_d_upper = (s + 1.96 * sd) * (s + 1.96 * sd);
  } else {
    out.inv_tau_d = out.inv_tau_d_upper = 1.0 / out.params.tau_d;
  }
  out.params.phi0 = reduce_phase(out.params.phi0);
  return out;
}

}  // namespace

std::string to_string(FitParam p) {
  switch (p) {
    case FitParam::N0: return "n0";
    case FitParam::TauD: return "tau_d";
    case FitParam::Phi0: return "phi0";
    case FitParam::Background: return "background";
  }
  return "unknown";
}

FitParam fit_param_from_string(const std::string& name) {
  for (FitParam p : kCanonical)
    if (to_string(p) == name) return p;
  throw DomainError("unknown fit parameter '" + name + "'");
}

void validate(const FitConfig& cfg) {
  validate(cfg.initial);
  if (!(cfg.initial.t_pump > 0.0)) throw DomainError("FitConfig: initial.t_pump must be > 0");
  if (cfg.phase_grid < 1) throw DomainError("FitConfig: phase_grid must be >= 1");
  if (cfg.max_iters < 1) throw DomainError("FitConfig: max_iters must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw DomainError("FitConfig: tolerance must be > 0");
  std::set<FitParam> seen;
  for (FitParam p : cfg.free_params)
    if (!seen.insert(p).second) throw DomainError("FitConfig: duplicate free parameter " + to_string(p));
  for (FitParam p : kCanonical) {
    const auto it = cfg.bounds.find(p);
    if (it == cfg.bounds.end()) throw DomainError("FitConfig: missing bounds for " + to_string(p));
    const auto [lo, hi] = it->second;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw DomainError("FitConfig: bounds for " + to_string(p) + " must be finite with lo < hi");
  }
  if (!(cfg.bounds.at(FitParam::TauD).lo > 0.0)) throw DomainError("FitConfig: tau_d lower bound must be > 0");
}

double chi2(const CountSeries& series, const BeatParams& params) {
  const FitData data = data_from(series);
  const auto m = expected_bin_counts(params, data.bins);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = (data.y[static_cast<Eigen::Index>(i)] - m[i]) / data.sigma[static_cast<Eigen::Index>(i)];
    sum += r * r;
  }
  return sum;
}

double chi2(const RatioSeries& series, const BeatParams& params) {
  const FitData data = data_from(series, params);
  const auto m = expected_bin_counts(params, data.bins);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double r = (data.y[k] - m[i] / data.divisor[k]) / data.sigma[k];
    sum += r * r;
  }
  return sum;
}

FitResult fit_beat(const CountSeries& series, const FitConfig& cfg) { return fit(data_from(series), cfg); }

FitResult fit_beat(const RatioSeries& series, const FitConfig& cfg) {
  validate(cfg);
  return fit(data_from(series, cfg.initial), cfg);
}

}  // namespace trigamma
