#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trigamma/beat_model.hpp"
#include "trigamma/constants.hpp"
#include "trigamma/fitting.hpp"
#include "trigamma/lamb_moessbauer.hpp"
#include "trigamma/lattice.hpp"
#include "trigamma/spectra.hpp"

namespace trigamma {

struct LatticeConfig {
  Eigen::Vector3d channel_axis{1, 1, 1};
  Eigen::Vector3d azimuth_reference{2, -1, -1};
  int g_shell_cutoff = 4;
};

/// Cone angle: explicit, or taken from the Bragg solver's candidate list.
struct GeometryConfig {
  std::optional<double> theta_deg;
  double azimuth_offset_deg = 0.0;
  int bragg_candidate = 0;
};

/// Inputs of the beat-time-constant estimate; mu_n defaults to 1 / depth_nuclear.
struct EstimateConfig {
  double f_lm = 0.5;
  double xi = 50e-6;
  std::optional<double> mu_n;
};

struct GridConfig {
  double t_start = 0.0;
  double t_stop = 72000.0;
  double step = 360.0;
};

/// Plane of points origin + i/(nu-1) u + j/(nv-1) v in the working frame, m.
struct FieldmapConfig {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d u{kRhodiumLatticeConstant, 0, 0};
  Eigen::Vector3d v{0, kRhodiumLatticeConstant, 0};
  int nu = 41;
  int nv = 41;
};

struct RunConfig {
  RhodiumParams rhodium;
  LatticeConfig lattice;
  GeometryConfig geometry;
  DisplacementEnsemble ensemble;
  EstimateConfig estimate;
  BeatParams beat;
  double kalpha_scale = 0.05;
  Binning binning;
  GridConfig grid;
  FieldmapConfig fieldmap;
  FitConfig fit;
  std::uint64_t seed = 20061017;
};

/// Shipped defaults (illustrative beat amplitudes; physical constants as documented).
RunConfig default_run_config();

nlohmann::json to_json(const RunConfig& cfg);

/// Builds a RunConfig from JSON layered over the defaults. Unknown keys and
/// wrong value types raise ConfigError naming the key path.
RunConfig run_config_from_json(const nlohmann::json& overrides);

/// Parses a JSON file; syntax errors raise ConfigError with line and column.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Applies "section.key=value" (value parsed as JSON, else taken as a string)
/// onto an override document.
void apply_override(nlohmann::json& overrides, const std::string& assignment);

LatticeSpec make_lattice(const RunConfig& cfg);

/// Geometry for the configured cone angle, or the chosen Bragg candidate when
/// no angle is given. Throws DomainError if the candidate does not exist.
TriGammaGeometry make_geometry(const RunConfig& cfg, const LatticeSpec& lattice);

}  // namespace trigamma
