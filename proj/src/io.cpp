#include "trigamma/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "trigamma/diagnostics.hpp"
#include "trigamma/error.hpp"

namespace trigamma {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructuralError("cannot open '" + path.string() + "' for reading");
  return is;
}

bool contiguous(double prev_end, double start) {
  return std::abs(prev_end - start) <= 1e-9 * std::max({1.0, std::abs(prev_end), std::abs(start)});
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw StructuralError(context + "invalid number '" + text + "'");
  return v;
}

void write_count_series(const CountSeries& series, std::ostream& os) {
  os << kCountSeriesHeader << '\n';
  const std::string channel = to_string(series.channel);
  for (const auto& b : series.bins)
    os << format_double(b.t_start) << ',' << format_double(b.width) << ',' << b.counts << ',' << channel << '\n';
}

void write_count_series(const CountSeries& series, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_count_series(series, os);
}

CountSeries read_count_series(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw StructuralError(where(source, 1) + "missing header");
  strip_cr(line);
  if (line != kCountSeriesHeader)
    throw StructuralError(where(source, 1) + "bad header '" + line + "', expected '" + kCountSeriesHeader + "'");

  CountSeries series;
  bool have_channel = false;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string at = where(source, lineno);
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw StructuralError(at + "expected 4 fields, got " + std::to_string(fields.size()));
    CountBin bin;
    bin.t_start = parse_double(fields[0], at);
    bin.width = parse_double(fields[1], at);
    if (!std::isfinite(bin.t_start) || !(bin.width > 0.0) || !std::isfinite(bin.width))
      throw StructuralError(at + "bin start must be finite and width > 0");
    const std::string& c = fields[2];
    if (!c.empty() && c.front() == '-') throw StructuralError(at + "negative counts '" + c + "'");
    const auto res = std::from_chars(c.data(), c.data() + c.size(), bin.counts);
    if (c.empty() || res.ec != std::errc() || res.ptr != c.data() + c.size())
      throw StructuralError(at + "counts must be a nonnegative integer, got '" + c + "'");
    Channel channel;
    try {
      channel = channel_from_string(fields[3]);
    } catch (const StructuralError& e) {
      throw StructuralError(at + e.what());
    }
    if (!have_channel) {
      series.channel = channel;
      series.energy_window = default_energy_window(channel);
      have_channel = true;
    } else if (channel != series.channel) {
      throw StructuralError(at + "mixed channels in one series");
    }
    if (!series.bins.empty()) {
      const auto& prev = series.bins.back();
      const double prev_end = prev.t_start + prev.width;
      if (!contiguous(prev_end, bin.t_start))
        throw StructuralError(at + (bin.t_start < prev_end ? "bin overlaps previous bin" : "gap after previous bin"));
    }
    series.bins.push_back(bin);
  }
  if (series.bins.empty()) warn(source + ": count series has no data rows");
  return series;
}

CountSeries read_count_series(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_count_series(is, path.string());
}

void write_ratio_series(const RatioSeries& series, std::ostream& os) {
  os << kRatioSeriesHeader << '\n';
  for (const auto& b : series.bins) {
    os << format_double(b.t_start) << ',' << format_double(b.width) << ','
       << format_double(b.valid ? b.ratio : std::nan("")) << ',' << format_double(b.valid ? b.sigma : std::nan(""))
       << '\n';
  }
}

void write_ratio_series(const RatioSeries& series, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_ratio_series(series, os);
}

RatioSeries read_ratio_series(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw StructuralError(where(source, 1) + "missing header");
  strip_cr(line);
  if (line != kRatioSeriesHeader)
    throw StructuralError(where(source, 1) + "bad header '" + line + "', expected '" + kRatioSeriesHeader + "'");
  RatioSeries series;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string at = where(source, lineno);
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw StructuralError(at + "expected 4 fields, got " + std::to_string(fields.size()));
    RatioBin b;
    b.t_start = parse_double(fields[0], at);
    b.width = parse_double(fields[1], at);
    b.ratio = parse_double(fields[2], at);
    b.sigma = parse_double(fields[3], at);
    b.valid = std::isfinite(b.ratio) && std::isfinite(b.sigma);
    b.low_count = b.valid && b.ratio == 0.0;
    if (!series.bins.empty()) {
      const auto& prev = series.bins.back();
      const double prev_end = prev.t_start + prev.width;
      if (!contiguous(prev_end, b.t_start))
        throw StructuralError(at + (b.t_start < prev_end ? "bin overlaps previous bin" : "gap after previous bin"));
    }
    series.bins.push_back(b);
  }
  if (series.bins.empty()) warn(source + ": ratio series has no data rows");
  return series;
}

RatioSeries read_ratio_series(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_ratio_series(is, path.string());
}

std::string read_header(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  std::getline(is, line);
  strip_cr(line);
  return line;
}

nlohmann::json to_json(const BeatParams& p) {
  return {{"n0", p.n0},         {"tau0_s", p.tau0},         {"tau_d_s", p.tau_d},
          {"phi0_rad", p.phi0}, {"t_pump_s", p.t_pump},     {"background", p.background},
          {"kernel", to_string(p.kernel)}};
}

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json matrix = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < r.covariance.cols(); ++j) row.push_back(r.covariance(i, j));
    matrix.push_back(row);
  }
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : r.starts)
    starts.push_back({{"phi0_start", s.phi0_start},
                      {"chi2", s.chi2},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"message", s.message}});
  return {{"params", to_json(r.params)},
          {"chi2", r.chi2},
          {"dof", r.dof},
          {"covariance", {{"names", r.covariance_names}, {"matrix", matrix}}},
          {"converged", r.converged},
          {"message", r.message},
          {"inv_tau_d", r.inv_tau_d},
          {"inv_tau_d_upper", r.inv_tau_d_upper},
          {"starts", starts}};
}

}  // namespace trigamma
