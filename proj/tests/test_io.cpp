#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "trigamma/diagnostics.hpp"
#include "trigamma/error.hpp"
#include "trigamma/io.hpp"

using namespace trigamma;
namespace fs = std::filesystem;

namespace {

std::string message_of(const std::string& csv) {
  std::istringstream is(csv);
  try {
    read_count_series(is, "in.csv");
  } catch (const StructuralError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shortest round-trip number text") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng) * std::pow(10.0, int(rng() % 40) - 20);
    CHECK(parse_double(format_double(v), "") == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(360.0) == "360");
  CHECK(std::isnan(parse_double("nan", "")));
  CHECK_THROWS_AS(parse_double("1.0x", "ctx: "), StructuralError);
  CHECK_THROWS_AS(parse_double("", "ctx: "), StructuralError);
}

TEST_CASE("count series round trip") {
  BeatParams p;
  p.n0 = 0.3;
  p.tau_d = 900.0;
  const auto sim = simulate_counts(p, 0.05, {60.0, 36000.0}, 12);
  for (const auto* s : {&sim.gamma, &sim.kalpha}) {
    std::stringstream ss;
    write_count_series(*s, ss);
    CHECK(read_count_series(ss) == *s);
  }
  const fs::path path = fs::temp_directory_path() / "trigamma_io_roundtrip.csv";
  write_count_series(sim.gamma, path);
  CHECK(read_count_series(path) == sim.gamma);
  CHECK(read_header(path) == kCountSeriesHeader);
  fs::remove(path);

  CountSeries odd;
  odd.bins = {{0.1, 0.30000000000000004, 0}, {0.4, 1e-7, 18446744073709551615ULL}};
  std::stringstream ss;
  write_count_series(odd, ss);
  CHECK(read_count_series(ss) == odd);
}

TEST_CASE("count series schema errors name the line") {
  const std::string h = std::string(kCountSeriesHeader) + "\n";
  CHECK(message_of("t,w,c,ch\n0,60,1,gamma\n").find("in.csv:1") != std::string::npos);
  CHECK(message_of(h + "0,60,1,gamma\n60,60,-4,gamma\n").find("in.csv:3") != std::string::npos);
  CHECK(message_of(h + "0,60,1,gamma\n30,60,4,gamma\n").find("in.csv:3: bin overlaps") != std::string::npos);
  CHECK(message_of(h + "0,60,1,gamma\n90,60,4,gamma\n").find("in.csv:3: gap") != std::string::npos);
  CHECK(message_of(h + "0,60,1,gamma\n60,60,4,kalpha\n").find("in.csv:3") != std::string::npos);
  CHECK(message_of(h + "0,60,1\n").find("in.csv:2") != std::string::npos);
  CHECK(message_of(h + "0,60,1.5,gamma\n").find("in.csv:2") != std::string::npos);
  CHECK(message_of(h + "0,0,1,gamma\n").find("in.csv:2") != std::string::npos);
  CHECK(message_of(h + "0,60,1,neutron\n").find("in.csv:2") != std::string::npos);
  CHECK(message_of("").find("in.csv:1") != std::string::npos);
  CHECK_THROWS_AS(read_count_series(fs::path("/nonexistent/trigamma.csv")), StructuralError);
}

TEST_CASE("empty data section") {
  ScopedWarningCapture cap;
  std::istringstream is(std::string(kCountSeriesHeader) + "\n");
  const auto s = read_count_series(is);
  CHECK(s.bins.empty());
  CHECK(cap.count() == 1);
}

TEST_CASE("CRLF input") {
  std::istringstream is(std::string(kCountSeriesHeader) + "\r\n0,60,5,gamma\r\n60,60,6,gamma\r\n");
  const auto s = read_count_series(is);
  REQUIRE(s.bins.size() == 2);
  CHECK(s.bins[1].counts == 6);
}

TEST_CASE("ratio series round trip") {
  RatioSeries r;
  r.bins = {{0, 60, 0.25, 0.01, true, false}, {60, 60, 0, 0, false, false}, {120, 60, 1.0 / 3, 0.125, true, false}};
  r.bins[1].ratio = r.bins[1].sigma = std::nan("");
  std::stringstream ss;
  write_ratio_series(r, ss);
  CHECK(ss.str().find("60,60,nan,nan") != std::string::npos);
  const auto back = read_ratio_series(ss);
  REQUIRE(back.bins.size() == 3);
  CHECK(back.bins[0].ratio == 0.25);
  CHECK_FALSE(back.bins[1].valid);
  CHECK(back.bins[2].ratio == 1.0 / 3);
  std::istringstream bad(std::string(kRatioSeriesHeader) + "\n0,60,1,1\n0,60,1,1\n");
  CHECK_THROWS_WITH_AS(read_ratio_series(bad, "r.csv"), doctest::Contains("r.csv:3"), StructuralError);
}

TEST_CASE("fit result JSON") {
  FitResult r;
  r.params.tau_d = 485.7;
  r.chi2 = 601.25;
  r.dof = 596;
  r.covariance_names = {"n0", "tau_d"};
  r.covariance = Eigen::Matrix2d{{1.0, 0.5}, {0.5, 2.0}};
  r.starts.push_back({0.0, 601.25, 5, true, "ok"});
  const auto j = to_json(r);
  CHECK(j["params"]["tau_d_s"].get<double>() == 485.7);
  CHECK(j["params"]["kernel"] == "cos2");
  CHECK(j["covariance"]["matrix"][0][1].get<double>() == 0.5);
  CHECK(j["covariance"]["names"][1] == "tau_d");
  CHECK(j["starts"].size() == 1);
  CHECK(nlohmann::json::parse(j.dump())["chi2"].get<double>() == 601.25);
}
