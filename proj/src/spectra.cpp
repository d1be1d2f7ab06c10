#include "trigamma/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "trigamma/diagnostics.hpp"
#include "trigamma/error.hpp"

namespace trigamma {
namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

std::string to_string(Channel c) { return c == Channel::Gamma ? "gamma" : "kalpha"; }

Channel channel_from_string(const std::string& name) {
  if (name == "gamma") return Channel::Gamma;
  if (name == "kalpha") return Channel::KAlpha;
  throw StructuralError("unknown channel '" + name + "'");
}

std::pair<double, double> default_energy_window(Channel c) {
  return c == Channel::Gamma ? std::pair{39.5, 40.5} : std::pair{19.2, 21.2};
}

double CountSeries::error(std::size_t i) const { return std::sqrt(static_cast<double>(bins.at(i).counts)); }

std::uint64_t CountSeries::total() const {
  std::uint64_t sum = 0;
  for (const auto& b : bins) sum += b.counts;
  return sum;
}

std::vector<TimeBin> CountSeries::time_bins() const {
  std::vector<TimeBin> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back({b.t_start, b.width});
  return out;
}

void validate(const CountSeries& series) {
  for (std::size_t i = 0; i < series.bins.size(); ++i) {
    const auto& b = series.bins[i];
    if (!(b.width > 0.0) || !std::isfinite(b.t_start))
      throw StructuralError("bin " + std::to_string(i) + ": width must be > 0 and start finite");
    if (i == 0) continue;
    const auto& prev = series.bins[i - 1];
    if (!close(prev.t_start + prev.width, b.t_start))
      throw StructuralError("bin " + std::to_string(i) +
                            (b.t_start < prev.t_start + prev.width ? ": overlaps previous bin" : ": gap after previous bin"));
  }
}

std::vector<TimeBin> make_bins(const Binning& binning) {
  if (!(binning.width > 0.0)) throw DomainError("binning width must be > 0");
  if (!(binning.horizon > 0.0)) throw DomainError("binning horizon must be > 0");
  const double ratio = binning.horizon / binning.width;
  auto n = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    warn("horizon is not a multiple of the bin width; trailing partial bin dropped");
  std::vector<TimeBin> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {static_cast<double>(i) * binning.width, binning.width};
  return out;
}

std::vector<std::uint64_t> poisson_realization(const std::vector<double>& expected, std::uint64_t seed,
                                               std::uint32_t stream) {
  std::vector<std::uint64_t> out(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double mean = expected[i];
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("Poisson mean must be finite and >= 0");
    if (mean == 0.0) continue;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<std::uint64_t> draw(mean);
    out[i] = draw(rng);
  }
  return out;
}

SimulatedSpectra simulate_counts(const BeatParams& beat, double kalpha_scale, const Binning& binning,
                                 std::uint64_t seed) {
  validate(beat);
  const auto bins = make_bins(binning);
  SimulatedSpectra out;
  out.gamma_expected = expected_bin_counts(beat, bins);
  out.kalpha_expected = expected_kalpha_counts(kalpha_scale, beat.tau0, beat.t_pump, bins);
  const auto g = poisson_realization(out.gamma_expected, seed, 0);
  const auto k = poisson_realization(out.kalpha_expected, seed, 1);

  out.gamma.channel = Channel::Gamma;
  out.gamma.energy_window = default_energy_window(Channel::Gamma);
  out.kalpha.channel = Channel::KAlpha;
  out.kalpha.energy_window = default_energy_window(Channel::KAlpha);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out.gamma.bins.push_back({bins[i].t_start, bins[i].width, g[i]});
    out.kalpha.bins.push_back({bins[i].t_start, bins[i].width, k[i]});
  }
  return out;
}

RatioSeries normalize(const CountSeries& gamma, const CountSeries& kalpha) {
  if (gamma.bins.size() != kalpha.bins.size())
    throw StructuralError("normalize: series have different bin counts");
  RatioSeries out;
  out.bins.reserve(gamma.bins.size());
  for (std::size_t i = 0; i < gamma.bins.size(); ++i) {
    const auto& g = gamma.bins[i];
    const auto& k = kalpha.bins[i];
    if (!close(g.t_start, k.t_start) || !close(g.width, k.width))
      throw StructuralError("normalize: binning mismatch at bin " + std::to_string(i));
    RatioBin r{g.t_start, g.width, 0.0, 0.0, true, false};
    if (k.counts == 0) {
      r.valid = false;
      r.ratio = std::numeric_limits<double>::quiet_NaN();
      r.sigma = std::numeric_limits<double>::quiet_NaN();
    } else if (g.counts == 0) {
      r.low_count = true;
      r.sigma = 1.0 / static_cast<double>(k.counts);
    } else {
      const double gd = static_cast<double>(g.counts);
      const double kd = static_cast<double>(k.counts);
      r.ratio = gd / kd;
      r.sigma = r.ratio * std::sqrt(1.0 / gd + 1.0 / kd);
    }
    out.bins.push_back(r);
  }
  return out;
}

CountSeries rebin(const CountSeries& series, std::size_t factor) {
  if (factor == 0) throw DomainError("rebin: factor must be >= 1");
  CountSeries out;
  out.channel = series.channel;
  out.energy_window = series.energy_window;
  const std::size_t groups = series.bins.size() / factor;
  if (series.bins.size() % factor != 0)
    warn("rebin: " + std::to_string(series.bins.size() % factor) + " trailing bins dropped");
  for (std::size_t g = 0; g < groups; ++g) {
    CountBin merged{series.bins[g * factor].t_start, 0.0, 0};
    for (std::size_t j = 0; j < factor; ++j) {
      merged.width += series.bins[g * factor + j].width;
      merged.counts += series.bins[g * factor + j].counts;
    }
    out.bins.push_back(merged);
  }
  return out;
}

}  // namespace trigamma
