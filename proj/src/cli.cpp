#include "trigamma/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "trigamma/config.hpp"
#include "trigamma/diagnostics.hpp"
#include "trigamma/error.hpp"
#include "trigamma/fields.hpp"
#include "trigamma/io.hpp"

namespace trigamma {
namespace {

using nlohmann::json;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::string out;
  std::string format = "csv";
};

RunConfig resolve_config(const Globals& g) {
  json overrides = json::object();
  if (!g.config_path.empty()) overrides = load_json_file(g.config_path);
  for (const auto& s : g.sets) apply_override(overrides, s);
  RunConfig cfg = run_config_from_json(overrides);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

// Sends text to --out when given, else to the provided stream.
void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream os(g.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + g.out + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("write to '" + g.out + "' failed");
}

bool want_json(const Globals& g) { return g.format == "json"; }

void require_csv(const Globals& g, const char* command) {
  if (want_json(g)) throw ConfigError(std::string(command) + " writes CSV only; drop --format json");
}

std::string cmd_estimate(const Globals& g, const RunConfig& cfg) {
  validate(cfg.rhodium);
  const double mu_n = cfg.estimate.mu_n.value_or(1.0 / cfg.rhodium.depth_nuclear);
  const double td = tau_d(cfg.rhodium.tau0, cfg.estimate.f_lm, mu_n, cfg.estimate.xi);
  struct Row {
    const char* name;
    double value;
    const char* unit;
  };
  const Row rows[] = {
      {"natural_linewidth", natural_linewidth(cfg.rhodium.tau0), "eV"},
      {"doppler_speed", doppler_speed_per_linewidth(cfg.rhodium), "m/s"},
      {"thermal_strain_rate", thermal_strain_rate(cfg.rhodium), "1/s"},
      {"photon_wavenumber", photon_wavenumber(cfg.rhodium.gamma_energy), "1/m"},
      {"tau_d", td, "s"},
      {"tau_d_over_tau0", td / cfg.rhodium.tau0, "1"},
  };
  if (want_json(g)) {
    json j = json::object();
    for (const auto& r : rows) j[r.name] = {{"value", r.value}, {"unit", r.unit}};
    return j.dump(2) + "\n";
  }
  std::string s = "quantity,value,unit\n";
  for (const auto& r : rows) s += std::string(r.name) + "," + format_double(r.value) + "," + r.unit + "\n";
  return s;
}

std::string cmd_bragg(const Globals& g, const RunConfig& cfg) {
  const LatticeSpec lattice = make_lattice(cfg);
  const auto cands = bragg_angle_solve(photon_wavenumber(cfg.rhodium.gamma_energy), lattice);
  if (cands.empty()) warn("no Bragg-matched cone angle within the reciprocal-vector cutoff");
  const double deg = 180.0 / units::pi;
  if (want_json(g)) {
    json arr = json::array();
    for (const auto& c : cands) {
      json gs = json::array();
      for (const auto& rv : c.g) gs.push_back({rv.hkl.x(), rv.hkl.y(), rv.hkl.z()});
      arr.push_back({{"theta_deg", c.theta * deg},
                     {"azimuth_offset_deg", c.azimuth_offset * deg},
                     {"g_hkl", gs},
                     {"residual", c.residual}});
    }
    return arr.dump(2) + "\n";
  }
  std::string s = "theta_deg,azimuth_offset_deg,h,k,l,residual\n";
  for (const auto& c : cands) {
    const auto& hkl = c.g[0].hkl;
    s += format_double(c.theta * deg) + "," + format_double(c.azimuth_offset * deg) + "," +
         std::to_string(hkl.x()) + "," + std::to_string(hkl.y()) + "," + std::to_string(hkl.z()) + "," +
         format_double(c.residual) + "\n";
  }
  return s;
}

std::string cmd_fieldmap(const Globals& g, const RunConfig& cfg) {
  require_csv(g, "fieldmap");
  const auto& fm = cfg.fieldmap;
  if (fm.nu < 1 || fm.nv < 1) throw DomainError("fieldmap: nu and nv must be >= 1");
  const LatticeSpec lattice = make_lattice(cfg);
  const TriGammaGeometry geom = make_geometry(cfg, lattice);
  std::ostringstream os;
  os << "x,y,z,re_ex,im_ex,re_ey,im_ey,re_ez,im_ez,abs_e\n";
  for (int j = 0; j < fm.nv; ++j) {
    for (int i = 0; i < fm.nu; ++i) {
      const double a = fm.nu > 1 ? double(i) / (fm.nu - 1) : 0.0;
      const double b = fm.nv > 1 ? double(j) / (fm.nv - 1) : 0.0;
      const Eigen::Vector3d r = fm.origin + a * fm.u + b * fm.v;
      const auto e = evaluate_E(geom, r);
      os << format_double(r.x()) << ',' << format_double(r.y()) << ',' << format_double(r.z());
      for (int c = 0; c < 3; ++c) os << ',' << format_double(e[c].real()) << ',' << format_double(e[c].imag());
      os << ',' << format_double(e.norm()) << '\n';
    }
  }
  return os.str();
}

std::string cmd_flm(const Globals& g, const RunConfig& cfg, const std::string& interpretation) {
  const LatticeSpec lattice = make_lattice(cfg);
  const TriGammaGeometry geom = make_geometry(cfg, lattice);
  DisplacementEnsemble ens = cfg.ensemble;
  ens.seed = cfg.seed;
  FlmResult r;
  if (interpretation == "coherent") {
    r = flm_coherent_mc(geom, ens);
  } else if (interpretation == "incoherent") {
    r = flm_incoherent_mc(geom, ens);
  } else {
    throw ConfigError("--interpretation must be coherent or incoherent");
  }
  const double closed = flm_closed_form(geom, ens.sigma).value;
  if (want_json(g)) {
    json j = {{"value", r.value},
              {"stderr", r.std_error ? json(*r.std_error) : json(nullptr)},
              {"interpretation", to_string(r.interpretation)},
              {"closed_form", closed}};
    return j.dump(2) + "\n";
  }
  return std::string("value,stderr,interpretation,closed_form\n") + format_double(r.value) + "," +
         (r.std_error ? format_double(*r.std_error) : std::string("nan")) + "," + to_string(r.interpretation) +
         "," + format_double(closed) + "\n";
}

std::string cmd_beat(const Globals& g, const RunConfig& cfg) {
  require_csv(g, "beat");
  const auto& gr = cfg.grid;
  if (!(gr.step > 0.0) || !(gr.t_stop >= gr.t_start) || gr.t_start < 0.0)
    throw DomainError("beat: grid needs 0 <= t_start <= t_stop and step > 0");
  std::vector<double> ts;
  const auto n = static_cast<std::size_t>(std::floor((gr.t_stop - gr.t_start) / gr.step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) ts.push_back(gr.t_start + static_cast<double>(i) * gr.step);
  const auto curve = beat_curve(cfg.beat, ts);
  std::string s = "t_s,intensity\n";
  for (const auto& [t, v] : curve) s += format_double(t) + "," + format_double(v) + "\n";
  return s;
}

void cmd_simulate(const Globals& g, const RunConfig& cfg, std::ostream& out) {
  require_csv(g, "simulate");
  if (g.out.empty()) throw ConfigError("simulate needs --out PREFIX (writes PREFIX.gamma.csv and PREFIX.kalpha.csv)");
  const auto sim = simulate_counts(cfg.beat, cfg.kalpha_scale, cfg.binning, cfg.seed);
  const std::string gpath = g.out + ".gamma.csv";
  const std::string kpath = g.out + ".kalpha.csv";
  write_count_series(sim.gamma, std::filesystem::path(gpath));
  write_count_series(sim.kalpha, std::filesystem::path(kpath));
  out << gpath << "\n" << kpath << "\n";
}

std::string cmd_fit(const RunConfig& cfg, const std::string& input) {
  FitConfig fc = cfg.fit;
  fc.initial = cfg.beat;
  const std::string header = read_header(input);
  FitResult r;
  if (header == kCountSeriesHeader) {
    r = fit_beat(read_count_series(std::filesystem::path(input)), fc);
  } else if (header == kRatioSeriesHeader) {
    r = fit_beat(read_ratio_series(std::filesystem::path(input)), fc);
  } else {
    throw StructuralError(input + ":1: unrecognized header '" + header + "'");
  }
  return to_json(r).dump(2) + "\n";
}

std::string cmd_normalize(const Globals& g, const std::string& gamma, const std::string& kalpha) {
  require_csv(g, "normalize");
  const auto gs = read_count_series(std::filesystem::path(gamma));
  const auto ks = read_count_series(std::filesystem::path(kalpha));
  std::ostringstream os;
  write_ratio_series(normalize(gs, ks), os);
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tri-gamma Moessbauer beat toolkit", "trigamma"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config layered over the defaults");
  app.add_option("--seed", g.seed, "RNG seed (overrides config)");
  app.add_option("--set", g.sets, "Override one config value, e.g. beat.tau_d_s=485.7");
  app.add_option("--out", g.out, "Output file (prefix for simulate)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::function<void()> action;
  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  auto* estimate = sub("estimate", "Linewidth, Doppler speed, strain rate and beat time constant");
  estimate->callback([&] { action = [&] { emit(g, out, cmd_estimate(g, resolve_config(g))); }; });

  auto* bragg = sub("bragg", "Bragg-matched cone angles for the configured lattice");
  bragg->callback([&] { action = [&] { emit(g, out, cmd_bragg(g, resolve_config(g))); }; });

  auto* fieldmap = sub("fieldmap", "Electric field of the tri-gamma mode on a plane");
  fieldmap->callback([&] { action = [&] { emit(g, out, cmd_fieldmap(g, resolve_config(g))); }; });

  std::string interpretation = "coherent";
  auto* flm = sub("flm", "Entangled Lamb-Moessbauer factor by Monte Carlo");
  flm->add_option("--interpretation", interpretation, "coherent or incoherent")
      ->check(CLI::IsMember({"coherent", "incoherent"}));
  flm->callback([&] { action = [&] { emit(g, out, cmd_flm(g, resolve_config(g), interpretation)); }; });

  auto* beat = sub("beat", "Accumulated beat intensity on the configured time grid");
  beat->callback([&] { action = [&] { emit(g, out, cmd_beat(g, resolve_config(g))); }; });

  auto* simulate = sub("simulate", "Synthetic gamma and K-alpha count series");
  simulate->callback([&] { action = [&] { cmd_simulate(g, resolve_config(g), out); }; });

  std::string input;
  auto* fit = sub("fit", "Fit beat parameters to a count or ratio CSV");
  fit->add_option("--input", input, "Count or ratio series CSV")->required();
  fit->callback([&] { action = [&] { emit(g, out, cmd_fit(resolve_config(g), input)); }; });

  std::string gamma_path, kalpha_path;
  auto* norm = sub("normalize", "Gamma / K-alpha ratio series");
  norm->add_option("--gamma", gamma_path, "Gamma count series CSV")->required();
  norm->add_option("--kalpha", kalpha_path, "K-alpha count series CSV")->required();
  norm->callback([&] { action = [&] { emit(g, out, cmd_normalize(g, gamma_path, kalpha_path)); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace trigamma
