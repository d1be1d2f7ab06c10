#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trigamma/geometry.hpp"

namespace trigamma {

enum class DisplacementModel { LongitudinalGaussian, IsotropicGaussian, ExplicitSamples };

std::string to_string(DisplacementModel m);
DisplacementModel displacement_model_from_string(const std::string& name);

/// Stochastic atomic displacement r. Gaussian models draw sigma * N(0,1) on each
/// active axis (z only for longitudinal); explicit samples are averaged as given.
struct DisplacementEnsemble {
  DisplacementModel model = DisplacementModel::LongitudinalGaussian;
  double sigma = 0.0;  ///< m
  std::vector<Eigen::Vector3d> samples;
  std::uint64_t seed = 0;
  std::int64_t n_samples = 1'000'000;
};

void validate(const DisplacementEnsemble& ens);

enum class FlmInterpretation { Coherent, Incoherent };

std::string to_string(FlmInterpretation i);

struct FlmResult {
  double value = 0.0;
  /// Monte-Carlo standard error; nullopt when fewer than two batches were available.
  std::optional<double> std_error = 0.0;
  FlmInterpretation interpretation = FlmInterpretation::Coherent;
};

/// Number of batch means used for Monte-Carlo error estimates.
inline constexpr int kFlmBatches = 32;

/// |< sum_n exp(i k_n . r) >|^2, ensemble average inside the modulus. The
/// standard error is the delta-method propagation of the batch-mean spread of
/// the complex amplitude.
FlmResult flm_coherent_mc(const TriGammaGeometry& geom, const DisplacementEnsemble& ens);

/// < |sum_n exp(i k_n . r)|^2 >, batch-mean standard error.
FlmResult flm_incoherent_mc(const TriGammaGeometry& geom, const DisplacementEnsemble& ens);

/// 9 exp(-(k cos(theta) sigma)^2), exact for displacements along the channel axis.
FlmResult flm_closed_form(const TriGammaGeometry& geom, double sigma_longitudinal);

}  // namespace trigamma
