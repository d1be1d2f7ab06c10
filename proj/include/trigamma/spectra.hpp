#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trigamma/beat_model.hpp"

namespace trigamma {

enum class Channel { Gamma, KAlpha };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& name);

/// Nominal detector windows, keV: 1 keV around the gamma line, 2 keV around Rh K-alpha.
std::pair<double, double> default_energy_window(Channel c);

struct CountBin {
  double t_start = 0.0;  ///< s
  double width = 0.0;    ///< s
  std::uint64_t counts = 0;

  bool operator==(const CountBin&) const = default;
};

/// Binned counts of one detector channel. Bins are contiguous and sorted.
struct CountSeries {
  Channel channel = Channel::Gamma;
  std::pair<double, double> energy_window = default_energy_window(Channel::Gamma);  ///< keV, metadata
  std::vector<CountBin> bins;

  /// Poisson error sqrt(counts) of bin i.
  double error(std::size_t i) const;
  std::uint64_t total() const;
  std::vector<TimeBin> time_bins() const;

  bool operator==(const CountSeries&) const = default;
};

/// Throws StructuralError unless bins are sorted, contiguous, non-overlapping, with
/// positive widths.
void validate(const CountSeries& series);

struct RatioBin {
  double t_start = 0.0;
  double width = 0.0;
  double ratio = 0.0;
  double sigma = 0.0;
  bool valid = true;       ///< false when the K-alpha bin is empty
  bool low_count = false;  ///< gamma bin empty; sigma uses a one-count floor
};

struct RatioSeries {
  std::vector<RatioBin> bins;
};

struct Binning {
  double width = 360.0;     ///< s
  double horizon = 72000.0;  ///< s
};

/// Bins [i w, (i+1) w) covering the horizon; a trailing partial bin is dropped with a warning.
std::vector<TimeBin> make_bins(const Binning& binning);

/// Poisson draw per bin. Bin i of stream `stream` uses its own generator seeded by
/// (seed, stream, i), so any subset of bins is reproducible on its own.
std::vector<std::uint64_t> poisson_realization(const std::vector<double>& expected, std::uint64_t seed,
                                               std::uint32_t stream);

struct SimulatedSpectra {
  CountSeries gamma;
  CountSeries kalpha;
  std::vector<double> gamma_expected;
  std::vector<double> kalpha_expected;
};

/// Gamma expectations follow the pumped beat model, K-alpha the beat-free decay with
/// the same lifetime and pump window scaled by kalpha_scale.
SimulatedSpectra simulate_counts(const BeatParams& beat, double kalpha_scale, const Binning& binning,
                                 std::uint64_t seed);

/// Gamma / K-alpha per bin with sigma = ratio sqrt(1/g + 1/k). Empty gamma bins get
/// sigma = 1/k (one-count floor) and the low_count flag; empty K-alpha bins are invalid.
RatioSeries normalize(const CountSeries& gamma, const CountSeries& kalpha);

/// Sums groups of `factor` consecutive bins. A trailing remainder is dropped with a warning.
CountSeries rebin(const CountSeries& series, std::size_t factor);

}  // namespace trigamma
