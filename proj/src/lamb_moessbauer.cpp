#include "trigamma/lamb_moessbauer.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "trigamma/error.hpp"
#include "trigamma/parallel.hpp"

namespace trigamma {
namespace {

struct BatchSums {
  std::complex<double> amplitude{};  // sum over samples of sum_n exp(i k_n . r)
  double intensity = 0.0;            // sum over samples of |...|^2
  std::int64_t count = 0;
};

std::complex<double> phase_sum(const TriGammaGeometry& geom, const Eigen::Vector3d& r) {
  const Eigen::Vector3d phase = geom.k_vectors.transpose() * r;
  return std::polar(1.0, phase[0]) + std::polar(1.0, phase[1]) + std::polar(1.0, phase[2]);
}

void accumulate(BatchSums& b, const std::complex<double>& a) {
  b.amplitude += a;
  b.intensity += std::norm(a);
  ++b.count;
}

// Batch b draws from its own generator seeded by (seed, b), so results depend
// only on the seed and the batch layout, not on scheduling.
std::vector<BatchSums> run_batches(const TriGammaGeometry& geom, const DisplacementEnsemble& ens) {
  validate(ens);
  const std::int64_t n = ens.model == DisplacementModel::ExplicitSamples
                             ? static_cast<std::int64_t>(ens.samples.size())
                             : ens.n_samples;
  const int batches = static_cast<int>(std::min<std::int64_t>(kFlmBatches, n));
  std::vector<BatchSums> out(batches);
  parallel_for(out.size(), [&](std::size_t b) {
    const std::int64_t begin = n * static_cast<std::int64_t>(b) / batches;
    const std::int64_t end = n * static_cast<std::int64_t>(b + 1) / batches;
    BatchSums& sums = out[b];
    if (ens.model == DisplacementModel::ExplicitSamples) {
      for (std::int64_t i = begin; i < end; ++i) accumulate(sums, phase_sum(geom, ens.samples[i]));
      return;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(ens.seed), static_cast<std::uint32_t>(ens.seed >> 32),
                      static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, ens.sigma);
    for (std::int64_t i = begin; i < end; ++i) {
      Eigen::Vector3d r = Eigen::Vector3d::Zero();
      if (ens.model == DisplacementModel::IsotropicGaussian) {
        r.x() = normal(rng);
        r.y() = normal(rng);
      }
      r.z() = normal(rng);
      accumulate(sums, phase_sum(geom, r));
    }
  });
  return out;
}

}  // namespace

std::string to_string(DisplacementModel m) {
  switch (m) {
    case DisplacementModel::LongitudinalGaussian: return "longitudinal-gaussian";
    case DisplacementModel::IsotropicGaussian: return "isotropic-gaussian";
    case DisplacementModel::ExplicitSamples: return "explicit-samples";
  }
  return "unknown";
}

DisplacementModel displacement_model_from_string(const std::string& name) {
  if (name == "longitudinal-gaussian") return DisplacementModel::LongitudinalGaussian;
  if (name == "isotropic-gaussian") return DisplacementModel::IsotropicGaussian;
  if (name == "explicit-samples") return DisplacementModel::ExplicitSamples;
  throw DomainError("unknown displacement model '" + name + "'");
}

std::string to_string(FlmInterpretation i) {
  return i == FlmInterpretation::Coherent ? "coherent" : "incoherent";
}

void validate(const DisplacementEnsemble& ens) {
  if (!(ens.sigma >= 0.0) || !std::isfinite(ens.sigma)) throw DomainError("DisplacementEnsemble: sigma must be >= 0");
  if (ens.model == DisplacementModel::ExplicitSamples) {
    if (ens.samples.empty()) throw DomainError("DisplacementEnsemble: explicit-samples model needs samples");
  } else if (ens.n_samples < 1) {
    throw DomainError("DisplacementEnsemble: n_samples must be >= 1");
  }
}

FlmResult flm_coherent_mc(const TriGammaGeometry& geom, const DisplacementEnsemble& ens) {
  const auto batches = run_batches(geom, ens);
  std::complex<double> total{};
  std::int64_t n = 0;
  for (const auto& b : batches) {
    total += b.amplitude;
    n += b.count;
  }
  const std::complex<double> mean = total / static_cast<double>(n);

  FlmResult out;
  out.value = std::norm(mean);
  out.interpretation = FlmInterpretation::Coherent;
  const int nb = static_cast<int>(batches.size());
  if (nb < 2) {
    out.std_error = std::nullopt;
    return out;
  }
  // d|A|^2 = 2 Re(conj(A) dA)
  double ss = 0.0;
  for (const auto& b : batches) {
    const std::complex<double> dev = b.amplitude / static_cast<double>(b.count) - mean;
    const double d = 2.0 * (std::conj(mean) * dev).real();
    ss += d * d;
  }
  out.std_error = std::sqrt(ss / (nb * (nb - 1.0)));
  return out;
}

FlmResult flm_incoherent_mc(const TriGammaGeometry& geom, const DisplacementEnsemble& ens) {
  const auto batches = run_batches(geom, ens);
  double total = 0.0;
  std::int64_t n = 0;
  for (const auto& b : batches) {
    total += b.intensity;
    n += b.count;
  }
  FlmResult out;
  out.value = total / static_cast<double>(n);
  out.interpretation = FlmInterpretation::Incoherent;
  const int nb = static_cast<int>(batches.size());
  if (nb < 2) {
    out.std_error = std::nullopt;
    return out;
  }
  double ss = 0.0;
  for (const auto& b : batches) {
    const double d = b.intensity / static_cast<double>(b.count) - out.value;
    ss += d * d;
  }
  out.std_error = std::sqrt(ss / (nb * (nb - 1.0)));
  return out;
}

FlmResult flm_closed_form(const TriGammaGeometry& geom, double sigma_longitudinal) {
  if (!(sigma_longitudinal >= 0.0)) throw DomainError("flm_closed_form: sigma must be >= 0");
  const double x = geom.k_entangled.z() * sigma_longitudinal;
  return {9.0 * std::exp(-x * x), 0.0, FlmInterpretation::Coherent};
}

}  // namespace trigamma
