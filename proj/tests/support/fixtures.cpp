#include "fixtures.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <utility>

#include <unistd.h>

#include "zetamoments/parallel.hpp"

namespace zm::testing {

const ZeroList& zeros_from(std::uint64_t first, std::uint64_t count) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::uint64_t>, ZeroList> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({first, count});
  if (it == cache.end()) {
    IsolationOptions opts;
    opts.workers = default_workers();
    it = cache.emplace(std::pair{first, count}, isolate_zero_indices(first, count, opts)).first;
  }
  return it->second;
}

bool matches_printed(double value, double printed, int digits) {
  if (printed == 0.0) return value == 0.0;
  if ((value < 0) != (printed < 0)) return false;
  const double v = std::fabs(value), p = std::fabs(printed);
  const double ulp = std::pow(10.0, std::floor(std::log10(p)) - digits + 1);
  const double slack = 1e-9 * ulp;
  const bool rounded = std::fabs(v - p) <= 0.5 * ulp + slack;
  const bool truncated = v >= p - slack && v < p + ulp + slack;
  return rounded || truncated;
}

ScratchDir::ScratchDir(const std::string& tag) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("zm-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace zm::testing
