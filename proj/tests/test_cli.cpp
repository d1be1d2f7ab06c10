#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trigamma/cli.hpp"
#include "trigamma/config.hpp"
#include "trigamma/error.hpp"
#include "trigamma/io.hpp"

using namespace trigamma;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "trigamma_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

double csv_value(const std::string& csv, const std::string& key) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(key + ",", 0) == 0) {
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      return std::stod(line.substr(a + 1, b - a - 1));
    }
  return std::nan("");
}

}  // namespace

TEST_CASE("shipped config equals the built-in defaults") {
  const auto shipped = load_json_file(fs::path(TRIGAMMA_SOURCE_DIR) / "config" / "default.json");
  CHECK(shipped == to_json(default_run_config()));
  CHECK(to_json(run_config_from_json(shipped)) == shipped);
}

TEST_CASE("estimate") {
  const auto r = run({"estimate"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("quantity,value,unit\n", 0) == 0);
  CHECK(csv_value(r.out, "natural_linewidth") == doctest::Approx(1.355e-19).epsilon(1e-3));
  CHECK(csv_value(r.out, "doppler_speed") == doctest::Approx(1.0e-15).epsilon(0.2));
  CHECK(csv_value(r.out, "thermal_strain_rate") == doctest::Approx(9.25e-13).epsilon(1e-3));
  CHECK(csv_value(r.out, "tau_d_over_tau0") == doctest::Approx(0.88).epsilon(1e-12));
  const auto j = run({"--format", "json", "estimate"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out)["tau_d"]["unit"] == "s");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"estimate", "--bogus"}).code == 2);
  CHECK(run({"--format", "xml", "estimate"}).code == 2);
  CHECK(run({"fit"}).code == 2);
  CHECK(run({"--set", "beat.nope=1", "estimate"}).code == 2);
  CHECK(run({"--set", "noequals", "estimate"}).code == 2);
  CHECK(run({"--set", "beat.kernel=\"sinc\"", "beat"}).code == 2);
  CHECK(run({"--format", "json", "beat"}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("malformed config reports line and column") {
  const auto path = scratch("broken.json");
  write(path, "{\n  \"beat\": {\n    \"n0\": 1.0,,\n  }\n}\n");
  const auto r = run({"--config", path.string(), "estimate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("broken.json:3:") != std::string::npos);
  write(path, "{\"beat\": {\"n0\": \"lots\"}}");
  CHECK(run({"--config", path.string(), "estimate"}).code == 2);
  write(path, "{\"beat\": {\"n00\": 1}}");
  const auto unknown = run({"--config", path.string(), "estimate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("beat.n00") != std::string::npos);
  CHECK(run({"--config", scratch("missing.json").string(), "estimate"}).code == 2);
}

TEST_CASE("domain errors exit 1") {
  CHECK(run({"--set", "rhodium.tau0_s=-5", "estimate"}).code == 1);
  CHECK(run({"--set", "geometry.bragg_candidate=999", "flm"}).code == 1);
  CHECK(run({"normalize", "--gamma", "/nonexistent/g.csv", "--kalpha", "/nonexistent/k.csv"}).code == 1);
}

TEST_CASE("bragg and fieldmap") {
  const auto b = run({"bragg"});
  REQUIRE(b.code == 0);
  std::istringstream is(b.out);
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header == "theta_deg,azimuth_offset_deg,h,k,l,residual");
  CHECK(std::stod(first) > 7.6);
  CHECK(std::stod(first) < 7.7);

  const auto f = run({"--set", "fieldmap.nu=3", "--set", "fieldmap.nv=2", "fieldmap"});
  REQUIRE(f.code == 0);
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 7);
  CHECK(f.out.rfind("x,y,z,re_ex,im_ex,re_ey,im_ey,re_ez,im_ez,abs_e\n", 0) == 0);
  // the origin is a lattice site
  std::istringstream rows(f.out);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 1e-10);
}

TEST_CASE("flm") {
  const auto r = run({"--set", "ensemble.n_samples=20000", "flm"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("value,stderr,interpretation,closed_form\n", 0) == 0);
  CHECK(r.out.find(",coherent,") != std::string::npos);
  const auto i = run({"--set", "ensemble.n_samples=20000", "flm", "--interpretation", "incoherent"});
  CHECK(i.code == 0);
  CHECK(i.out.find(",incoherent,") != std::string::npos);
  CHECK(run({"flm", "--interpretation", "both"}).code == 2);
}

TEST_CASE("beat curve output") {
  const auto r = run({"--set", "grid.t_stop_s=3600", "beat"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t_s,intensity\n0,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
}

TEST_CASE("simulate, normalize and fit round trip") {
  const auto prefix = scratch("run").string();
  const std::vector<std::string> sets{"--set", "beat.tau_d_s=485.7", "--set", "beat.n0=0.5",
                                      "--set", "beat.t_pump_s=1800", "--set", "beat.background=0.01",
                                      "--set", "spectra.bin_width_s=60", "--set", "spectra.horizon_s=36000"};
  auto args = sets;
  args.insert(args.end(), {"--seed", "7", "--out", prefix, "simulate"});
  REQUIRE(run(args).code == 0);
  const std::string first = slurp(prefix + ".gamma.csv");
  CHECK(first.rfind(std::string(kCountSeriesHeader) + "\n", 0) == 0);
  REQUIRE(run(args).code == 0);
  CHECK(slurp(prefix + ".gamma.csv") == first);
  CHECK(read_count_series(fs::path(prefix + ".kalpha.csv")).channel == Channel::KAlpha);

  auto fit_args = sets;
  fit_args.insert(fit_args.end(), {"fit", "--input", prefix + ".gamma.csv"});
  const auto fit = run(fit_args);
  REQUIRE(fit.code == 0);
  const auto j = nlohmann::json::parse(fit.out);
  CHECK(std::abs(j["params"]["tau_d_s"].get<double>() / 485.7 - 1) < 0.05);
  CHECK(run(fit_args).out == fit.out);

  const auto norm = run({"normalize", "--gamma", prefix + ".gamma.csv", "--kalpha", prefix + ".kalpha.csv"});
  REQUIRE(norm.code == 0);
  CHECK(norm.out.rfind(std::string(kRatioSeriesHeader) + "\n", 0) == 0);
  const auto ratio_path = scratch("ratio.csv");
  write(ratio_path, norm.out);
  auto ratio_fit = sets;
  ratio_fit.insert(ratio_fit.end(), {"fit", "--input", ratio_path.string()});
  const auto rf = run(ratio_fit);
  REQUIRE(rf.code == 0);
  CHECK(std::abs(nlohmann::json::parse(rf.out)["params"]["tau_d_s"].get<double>() / 485.7 - 1) < 0.05);

  write(scratch("junk.csv"), "a,b\n1,2\n");
  CHECK(run({"fit", "--input", scratch("junk.csv").string()}).code == 1);
}

TEST_CASE("standalone executable") {
  const auto out = scratch("estimate.csv");
  const std::string cmd = std::string("\"") + TRIGAMMA_CLI_PATH + "\" --out \"" + out.string() + "\" estimate";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(out).rfind("quantity,value,unit\n", 0) == 0);
  const std::string bad = std::string("\"") + TRIGAMMA_CLI_PATH + "\" nonsense 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
