#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "trigamma/fitting.hpp"
#include "trigamma/spectra.hpp"

namespace trigamma {

inline constexpr const char* kCountSeriesHeader = "t_start_s,width_s,counts,channel";
inline constexpr const char* kRatioSeriesHeader = "t_start_s,width_s,ratio,sigma";

/// Shortest decimal text that parses back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double v);

/// Strict decimal parse of the whole string; throws StructuralError with `context`.
double parse_double(const std::string& text, const std::string& context);

void write_count_series(const CountSeries& series, std::ostream& os);
void write_count_series(const CountSeries& series, const std::filesystem::path& path);

/// Parses the CSV schema above. Bad header, wrong field count, negative or
/// non-integer counts, mixed channels, and overlapping or gapped bins raise
/// StructuralError naming the offending line. An empty data section is a valid
/// empty gamma series (with a warning).
CountSeries read_count_series(std::istream& is, const std::string& source = "<stream>");
CountSeries read_count_series(const std::filesystem::path& path);

/// Invalid bins are written as nan ratio and sigma and read back as invalid.
void write_ratio_series(const RatioSeries& series, std::ostream& os);
void write_ratio_series(const RatioSeries& series, const std::filesystem::path& path);
RatioSeries read_ratio_series(std::istream& is, const std::string& source = "<stream>");
RatioSeries read_ratio_series(const std::filesystem::path& path);

/// First line of a file, without trailing CR/LF.
std::string read_header(const std::filesystem::path& path);

nlohmann::json to_json(const BeatParams& p);
nlohmann::json to_json(const FitResult& r);

}  // namespace trigamma
