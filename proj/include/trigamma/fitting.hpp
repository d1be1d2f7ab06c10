#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "trigamma/beat_model.hpp"
#include "trigamma/spectra.hpp"

namespace trigamma {

enum class FitParam { N0, TauD, Phi0, Background };

std::string to_string(FitParam p);
FitParam fit_param_from_string(const std::string& name);

struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitConfig {
  std::vector<FitParam> free_params{FitParam::N0, FitParam::TauD, FitParam::Phi0, FitParam::Background};
  std::map<FitParam, ParamBounds> bounds{{FitParam::N0, {0.0, 1e12}},
                                         {FitParam::TauD, {1.0, 1e9}},
                                         {FitParam::Phi0, {-3.141592653589793, 6.283185307179586}},
                                         {FitParam::Background, {0.0, 1e12}}};
  int phase_grid = 8;  ///< phi0 multistart points over [0, pi)
  int max_iters = 200;
  double tolerance = 1e-10;
  int tau_d_scan_points = 64;  ///< log-spaced tau_d seeds per start
  unsigned threads = 0;        ///< 0 = hardware concurrency
  /// Fixed values (tau0, t_pump, kernel, and any parameter not listed as free).
  BeatParams initial{};
};

void validate(const FitConfig& cfg);

struct StartDiagnostics {
  double phi0_start = 0.0;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

struct FitResult {
  BeatParams params;
  double chi2 = 0.0;
  int dof = 0;
  std::vector<std::string> covariance_names;  ///< free parameters, canonical order
  Eigen::MatrixXd covariance;                 ///< in the reported parametrization (tau_d in s)
  bool converged = false;
  std::string message;
  double inv_tau_d = 0.0;        ///< fitted 1/tau_d, 1/s
  double inv_tau_d_upper = 0.0;  ///< ~95% upper bound on 1/tau_d from the local quadratic model
  std::vector<StartDiagnostics> starts;
};

/// Sum over bins of ((observed - model) / sigma)^2 with sigma = sqrt(max(counts, 1))
/// and the model taken as the bin integral of the pumped beat intensity.
double chi2(const CountSeries& series, const BeatParams& params);

/// Same for a gamma / K-alpha ratio; the model is the gamma bin integral divided
/// by the unit-scale K-alpha bin integral. Invalid bins are skipped.
double chi2(const RatioSeries& series, const BeatParams& params);

/// Weighted least squares over the free parameters: for each phi0 start a
/// log-spaced tau_d scan (linear parameters solved exactly) seeds a bounded
/// Levenberg-Marquardt descent; the lowest chi2 wins, ties going to the lower tau_d.
/// The reported phi0 is reduced modulo pi.
FitResult fit_beat(const CountSeries& series, const FitConfig& cfg);
FitResult fit_beat(const RatioSeries& series, const FitConfig& cfg);

}  // namespace trigamma
