#include "trigamma/config.hpp"

#include <fstream>
#include <sstream>

#include "trigamma/error.hpp"

namespace trigamma {
namespace {

using nlohmann::json;

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d to_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw json::type_error::create(302, "expected an array of 3 numbers", &j);
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> to_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// Overlays `patch` on `base`. Every key of the patch must already exist in the base,
// except inside fit.bounds values and explicit-sample lists, which are replaced wholesale.
void strict_merge(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw ConfigError("config: '" + path + "' must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ConfigError("config: unknown key '" + full + "'");
    json& target = base[key];
    if (target.is_object() && full != "fit.bounds") {
      strict_merge(target, value, full);
    } else if (full == "fit.bounds") {
      if (!value.is_object()) throw ConfigError("config: 'fit.bounds' must be an object");
      for (const auto& [name, range] : value.items()) {
        if (!target.contains(name)) throw ConfigError("config: unknown key 'fit.bounds." + name + "'");
        target[name] = range;
      }
    } else {
      target = value;
    }
  }
}

RunConfig from_merged(const json& j) {
  RunConfig c;
  const json& r = j.at("rhodium");
  c.rhodium.tau0 = r.at("tau0_s").get<double>();
  c.rhodium.gamma_energy = r.at("gamma_energy_eV").get<double>();
  c.rhodium.depth_photoelectric = r.at("depth_photoelectric_m").get<double>();
  c.rhodium.depth_nuclear = r.at("depth_nuclear_m").get<double>();
  c.rhodium.expansion_coeff = r.at("expansion_coeff_per_K").get<double>();
  c.rhodium.specific_heat = r.at("specific_heat_J_per_K_kg").get<double>();
  c.rhodium.density = r.at("density_kg_per_m3").get<double>();
  c.rhodium.lattice_constant = r.at("lattice_constant_m").get<double>();
  c.rhodium.sample_dims = to_vec(r.at("sample_dims_m"));
  c.rhodium.stored_energy = r.at("stored_energy_J").get<double>();

  const json& l = j.at("lattice");
  c.lattice.channel_axis = to_vec(l.at("channel_axis"));
  c.lattice.azimuth_reference = to_vec(l.at("azimuth_reference"));
  c.lattice.g_shell_cutoff = l.at("g_shell_cutoff").get<int>();

  const json& g = j.at("geometry");
  c.geometry.theta_deg = to_optional(g.at("theta_deg"));
  c.geometry.azimuth_offset_deg = g.at("azimuth_offset_deg").get<double>();
  c.geometry.bragg_candidate = g.at("bragg_candidate").get<int>();

  const json& e = j.at("ensemble");
  c.ensemble.model = displacement_model_from_string(e.at("model").get<std::string>());
  c.ensemble.sigma = e.at("sigma_m").get<double>();
  c.ensemble.n_samples = e.at("n_samples").get<std::int64_t>();
  c.ensemble.samples.clear();
  for (const auto& s : e.at("samples_m")) c.ensemble.samples.push_back(to_vec(s));

  const json& est = j.at("estimate");
  c.estimate.f_lm = est.at("f_lm").get<double>();
  c.estimate.xi = est.at("xi_m").get<double>();
  c.estimate.mu_n = to_optional(est.at("mu_n_per_m"));

  const json& b = j.at("beat");
  c.beat.n0 = b.at("n0").get<double>();
  c.beat.tau0 = b.at("tau0_s").get<double>();
  c.beat.tau_d = b.at("tau_d_s").get<double>();
  c.beat.phi0 = b.at("phi0_rad").get<double>();
  c.beat.t_pump = b.at("t_pump_s").get<double>();
  c.beat.background = b.at("background").get<double>();
  c.beat.kernel = beat_kernel_from_string(b.at("kernel").get<std::string>());

  const json& s = j.at("spectra");
  c.kalpha_scale = s.at("kalpha_scale").get<double>();
  c.binning.width = s.at("bin_width_s").get<double>();
  c.binning.horizon = s.at("horizon_s").get<double>();

  const json& gr = j.at("grid");
  c.grid.t_start = gr.at("t_start_s").get<double>();
  c.grid.t_stop = gr.at("t_stop_s").get<double>();
  c.grid.step = gr.at("step_s").get<double>();

  const json& fm = j.at("fieldmap");
  c.fieldmap.origin = to_vec(fm.at("origin_m"));
  c.fieldmap.u = to_vec(fm.at("u_m"));
  c.fieldmap.v = to_vec(fm.at("v_m"));
  c.fieldmap.nu = fm.at("nu").get<int>();
  c.fieldmap.nv = fm.at("nv").get<int>();

  const json& f = j.at("fit");
  c.fit.free_params.clear();
  for (const auto& name : f.at("free_params")) c.fit.free_params.push_back(fit_param_from_string(name.get<std::string>()));
  for (const auto& [name, range] : f.at("bounds").items()) {
    if (!range.is_array() || range.size() != 2) throw ConfigError("config: fit.bounds." + name + " must be [lo, hi]");
    c.fit.bounds[fit_param_from_string(name)] = {range.at(0).get<double>(), range.at(1).get<double>()};
  }
  c.fit.phase_grid = f.at("phase_grid").get<int>();
  c.fit.max_iters = f.at("max_iters").get<int>();
  c.fit.tolerance = f.at("tolerance").get<double>();
  c.fit.tau_d_scan_points = f.at("tau_d_scan_points").get<int>();
  c.fit.threads = f.at("threads").get<unsigned>();
  c.fit.initial = c.beat;

  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig c;
  c.ensemble.sigma = 5e-12;
  c.beat.n0 = 0.01;
  c.beat.tau_d = c.beat.tau0;
  c.beat.phi0 = 0.3;
  c.fit.initial = c.beat;
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  json samples = json::array();
  for (const auto& s : c.ensemble.samples) samples.push_back(vec(s));
  json free = json::array();
  for (FitParam p : c.fit.free_params) free.push_back(to_string(p));
  json bounds = json::object();
  for (const auto& [p, b] : c.fit.bounds) bounds[to_string(p)] = {b.lo, b.hi};
  return {
      {"rhodium",
       {{"tau0_s", c.rhodium.tau0},
        {"gamma_energy_eV", c.rhodium.gamma_energy},
        {"depth_photoelectric_m", c.rhodium.depth_photoelectric},
        {"depth_nuclear_m", c.rhodium.depth_nuclear},
        {"expansion_coeff_per_K", c.rhodium.expansion_coeff},
        {"specific_heat_J_per_K_kg", c.rhodium.specific_heat},
        {"density_kg_per_m3", c.rhodium.density},
        {"lattice_constant_m", c.rhodium.lattice_constant},
        {"sample_dims_m", vec(c.rhodium.sample_dims)},
        {"stored_energy_J", c.rhodium.stored_energy}}},
      {"lattice",
       {{"channel_axis", vec(c.lattice.channel_axis)},
        {"azimuth_reference", vec(c.lattice.azimuth_reference)},
        {"g_shell_cutoff", c.lattice.g_shell_cutoff}}},
      {"geometry",
       {{"theta_deg", optional_number(c.geometry.theta_deg)},
        {"azimuth_offset_deg", c.geometry.azimuth_offset_deg},
        {"bragg_candidate", c.geometry.bragg_candidate}}},
      {"ensemble",
       {{"model", to_string(c.ensemble.model)},
        {"sigma_m", c.ensemble.sigma},
        {"n_samples", c.ensemble.n_samples},
        {"samples_m", samples}}},
      {"estimate",
       {{"f_lm", c.estimate.f_lm}, {"xi_m", c.estimate.xi}, {"mu_n_per_m", optional_number(c.estimate.mu_n)}}},
      {"beat",
       {{"n0", c.beat.n0},
        {"tau0_s", c.beat.tau0},
        {"tau_d_s", c.beat.tau_d},
        {"phi0_rad", c.beat.phi0},
        {"t_pump_s", c.beat.t_pump},
        {"background", c.beat.background},
        {"kernel", to_string(c.beat.kernel)}}},
      {"spectra",
       {{"kalpha_scale", c.kalpha_scale}, {"bin_width_s", c.binning.width}, {"horizon_s", c.binning.horizon}}},
      {"grid", {{"t_start_s", c.grid.t_start}, {"t_stop_s", c.grid.t_stop}, {"step_s", c.grid.step}}},
      {"fieldmap",
       {{"origin_m", vec(c.fieldmap.origin)},
        {"u_m", vec(c.fieldmap.u)},
        {"v_m", vec(c.fieldmap.v)},
        {"nu", c.fieldmap.nu},
        {"nv", c.fieldmap.nv}}},
      {"fit",
       {{"free_params", free},
        {"bounds", bounds},
        {"phase_grid", c.fit.phase_grid},
        {"max_iters", c.fit.max_iters},
        {"tolerance", c.fit.tolerance},
        {"tau_d_scan_points", c.fit.tau_d_scan_points},
        {"threads", c.fit.threads}}},
      {"seed", c.seed},
  };
}

RunConfig run_config_from_json(const nlohmann::json& overrides) {
  json merged = to_json(default_run_config());
  strict_merge(merged, overrides.is_null() ? json::object() : overrides, "");
  try {
    return from_merged(merged);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t pos = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + e.what());
  }
}

void apply_override(nlohmann::json& overrides, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key.path=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (overrides.is_null()) overrides = json::object();
  json* node = &overrides;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set: empty key component in '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    json& child = (*node)[part];
    if (!child.is_object()) child = json::object();
    node = &child;
    start = dot + 1;
  }
}

LatticeSpec make_lattice(const RunConfig& cfg) {
  return LatticeSpec(cfg.rhodium.lattice_constant, cfg.lattice.channel_axis, cfg.lattice.g_shell_cutoff,
                     cfg.lattice.azimuth_reference);
}

TriGammaGeometry make_geometry(const RunConfig& cfg, const LatticeSpec& lattice) {
  const double k = photon_wavenumber(cfg.rhodium.gamma_energy);
  if (cfg.geometry.theta_deg) {
    return build_trigamma(k, *cfg.geometry.theta_deg * units::pi / 180.0,
                          cfg.geometry.azimuth_offset_deg * units::pi / 180.0);
  }
  const auto candidates = bragg_angle_solve(k, lattice);
  const int idx = cfg.geometry.bragg_candidate;
  if (idx < 0 || idx >= static_cast<int>(candidates.size()))
    throw DomainError("Bragg candidate " + std::to_string(idx) + " not available (" +
                      std::to_string(candidates.size()) + " found)");
  return build_trigamma(k, candidates[static_cast<std::size_t>(idx)]);
}

}  // namespace trigamma
