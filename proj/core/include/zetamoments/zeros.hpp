#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zetamoments/height.hpp"

namespace zm {

/// Ordered zero ordinates gamma_i = base + offsets[i].
struct ZeroList {
  std::string base = "0";
  std::vector<double> offsets;
  std::optional<std::uint64_t> first_index;  ///< 1-based index of offsets[0], if known
  /// Positions i such that zeros are missing between offsets[i-1] and offsets[i].
  std::vector<std::size_t> gaps;
  /// Free-form comment lines ('#' stripped) carried through files.
  std::vector<std::string> comments;

  std::size_t size() const noexcept { return offsets.size(); }
  bool empty() const noexcept { return offsets.empty(); }
  long double base_value() const;
  long double ordinate(std::size_t i) const;
  HeightValue height(std::size_t i) const;
  bool gap_before(std::size_t i) const;
  /// Global index of zero i when known (unknown after a gap).
  std::optional<std::uint64_t> index_of(std::size_t i) const;

  /// Checks strict monotonicity and recomputes gaps: a spacing above ten
  /// mean spacings 2 pi / log(t / 2 pi) is recorded as a gap.
  void validate_and_mark_gaps();
};

/// Mean zero spacing 2 pi / log(t / 2 pi) (t > 2 pi e to be meaningful).
double mean_spacing(long double t);

/// Gram point g_n, theta(g_n) = n pi, n >= -1.
HeightValue gram_point(long long n);
long double gram_point_value(long long n);

/// Largest n with g_n <= t.
long long gram_index_below(long double t);

struct IsolationOptions {
  unsigned workers = 1;
  int max_subdivision = 64;
  /// Absolute refinement tolerance; 0 selects 1e-9 * max(1, t / 1e6).
  double tolerance = 0.0;
};

struct IsolationReport {
  long long gram_lo = 0;    ///< good Gram point index at or below the range
  long long gram_hi = 0;    ///< good Gram point index at or above the range
  long long expected = 0;   ///< zeros between the two good Gram points
  long long found = 0;
  int gram_blocks = 0;
  int subdivided_blocks = 0;
  int rosser_exceptions = 0;  ///< blocks whose local count differs but the total balances
  std::uint64_t z_evaluations = 0;
};

/// All zeros in [t_lo, t_hi]. The count between the enclosing good Gram points
/// must equal their index difference (N(g_j) = j + 1); a shortfall that grid
/// subdivision cannot repair throws MissingZeroError naming the Gram block.
/// If expected_count is given the number of returned zeros must match too.
ZeroList isolate_zeros(long double t_lo, long double t_hi, std::optional<long long> expected_count = {},
                       const IsolationOptions& opts = {}, IsolationReport* report = nullptr);

/// Zeros number first .. first + count - 1 (1-based).
ZeroList isolate_zero_indices(std::uint64_t first, std::uint64_t count, const IsolationOptions& opts = {},
                              IsolationReport* report = nullptr);

struct ZeroBlock {
  std::size_t start = 0;  ///< index of the first zero in the list
  std::size_t end = 0;    ///< index of the closing zero (the next block's first)
  std::size_t count = 0;  ///< zeros owned by the block, end - start; zero i owns (gamma_i, gamma_{i+1})
  std::optional<std::uint64_t> first_index;
  long double alpha = 0;
  long double beta = 0;
};

struct BlockTiling {
  std::vector<ZeroBlock> blocks;
  std::size_t dropped_tail = 0;     ///< intervals after the last full block
  std::size_t skipped_for_gaps = 0; ///< zeros in partial runs cut short by gaps
};

/// Consecutive blocks of block_size intervals sharing endpoints; a block never
/// straddles a gap.
BlockTiling build_blocks(const ZeroList& zeros, std::size_t block_size);

void write_zero_file(const ZeroList& zeros, const std::filesystem::path& path,
                     const std::vector<std::string>& comments = {});
ZeroList read_zero_file(const std::filesystem::path& path);
/// Text form used by write_zero_file.
std::string render_zero_file(const ZeroList& zeros, const std::vector<std::string>& comments = {});
ZeroList parse_zero_file(const std::string& text);

}  // namespace zm
