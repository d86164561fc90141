#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridwatch::csv {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Splits on commas. No quoting: fields written by this library never contain
/// commas.
std::vector<std::string_view> split(std::string_view line);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

/// Whole file as a string; throws Error naming the path on failure.
std::string read_file(const std::filesystem::path& path);
/// Replaces the file contents; throws Error naming the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace gridwatch::csv
