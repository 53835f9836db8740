#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zm::io {

std::string library_version();

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Shortest "%.<digits>g" rendering; 17 or more digits round-trip doubles.
std::string format_double(double x, int significant_digits = 18);
/// Strict parse of a whole field; throws FormatError on trailing garbage.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::vector<std::string> split(std::string_view text, char delim);
std::string trim(std::string_view text);

std::string read_text(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames, so readers never see a torn file.
void write_text(const std::filesystem::path& path, std::string_view contents);

/// Provenance lines written as '#' comments into every output file.
struct Provenance {
  std::string tool_version = library_version();
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> inputs;  ///< (name, sha256)

  std::string render() const;
};

}  // namespace zm::io
