#pragma once

#include <cstdint>
#include <filesystem>

#include "zetamoments/zeros.hpp"

namespace zm::testing {

/// Zeros first .. first + count - 1, isolated once per process and cached.
const ZeroList& zeros_from(std::uint64_t first, std::uint64_t count);

/// 2400 zeros starting at #9,999,400 (height ~4.99e6).
inline const ZeroList& zeros_near_ten_million() { return zeros_from(9'999'400, 2400); }

/// True when `printed` is `value` rounded or truncated to `digits`
/// significant digits (published tables mix both).
bool matches_printed(double value, double printed, int digits);

/// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace zm::testing
