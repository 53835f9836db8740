#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zetamoments/height.hpp"
#include "zetamoments/quadrature.hpp"
#include "zetamoments/zeros.hpp"
#include "zetamoments/zeta_eval.hpp"

namespace zm::moments {

/// The exponent 2k of |zeta|^{2k}; any real two_k >= -0.5.
struct MomentExponent {
  double two_k = 2.0;

  explicit MomentExponent(double v);
  double k() const noexcept { return 0.5 * two_k; }
  friend auto operator<=>(const MomentExponent&, const MomentExponent&) = default;
};

std::vector<MomentExponent> exponents(const std::vector<double>& two_ks);

/// Per-interval absolute targets 1e-3 * mean gap(T) * expected moment(T), the
/// expectation being the leading term a(k) g(k)/(k^2)! (log T)^{k^2}. For
/// non-integer k the log of the expectation is interpolated linearly between
/// the neighbouring integers; k <= 0 uses 1.
struct AccuracyStandard {
  HeightValue T;
  long romberg_cap = 2048;
  double relative = 1e-3;

  double expected_moment(double two_k) const;
  double interval_target(double two_k) const;
  double aggregate_target(double two_k) const { return relative * expected_moment(two_k); }
};

/// HP dispatch: intervals whose midpoint |zeta| is at most `threshold` are
/// integrated with the HP model over `window` zeros (window/2 per side). The
/// reported error adds |I(window) - I(window/2)| as a model error estimate; an
/// interval whose total misses the target is redone directly.
struct HpConfig {
  double threshold = 7.0;
  int window = 1000;
  double cost = 0.2;  ///< one HP evaluation in units of direct evaluations
};

/// |zeta| quality requested from the direct evaluator.
inline constexpr double kDirectQuality = 1e-8;

struct ExponentResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

struct IntervalMoment {
  std::map<double, ExponentResult> results;  ///< keyed by two_k
  zeta::EvalMethod method = zeta::EvalMethod::riemann_siegel;
  double midpoint_abs = 0.0;
  double evals = 0.0;       ///< direct-evaluation units
  bool fell_back = false;   ///< HP result rejected and redone directly
  bool quality_met = true;  ///< every direct |zeta| met kDirectQuality
  bool flagged() const;
};

/// int_{gamma_n}^{gamma_{n+1}} |zeta(1/2+it)|^{2k} dt for each exponent. Exponents
/// >= 0 share a closed Romberg sweep whose endpoint values are the exact zeros
/// of the integrand; negative exponents use the substitution
/// t = a + (b-a)(3u^2 - 2u^3) and open Romberg.
IntervalMoment interval_moment(const ZeroList& zeros, std::size_t n, const std::vector<MomentExponent>& exps,
                               const AccuracyStandard& std, const std::optional<HpConfig>& hp = std::nullopt,
                               bool force_direct = false);

struct BlockRecord {
  std::uint64_t first_index = 0;
  std::size_t count = 0;
  double alpha = 0.0;  ///< offsets from the file base
  double beta = 0.0;
  std::map<double, double> moments;
  std::map<double, double> errors;
  double evals = 0.0;
  double hp_fraction = 0.0;
  std::vector<std::string> flaws;

  double interval_length() const { return beta - alpha; }
};

struct AuditEntry {
  std::size_t interval = 0;  ///< position in the zero list
  double two_k = 0.0;
  double hp_value = 0.0;
  double direct_value = 0.0;
  double bound = 0.0;
  bool ok() const;
};

struct BlockRunOptions {
  unsigned workers = 1;
  std::optional<HpConfig> hp;
  double audit_fraction = 0.01;
  std::uint64_t audit_seed = 0x5eed;
};

struct BlockRun {
  std::vector<BlockRecord> records;
  std::vector<AuditEntry> audit;
  std::size_t intervals = 0;
  std::size_t flagged_intervals = 0;
};

/// Integrates every interval of every block (in parallel, one slot per
/// interval) and reduces each block in order with compensated sums, so the
/// records do not depend on the worker count.
BlockRun block_moments(const ZeroList& zeros, const std::vector<ZeroBlock>& blocks,
                       const std::vector<MomentExponent>& exps, const AccuracyStandard& std,
                       const BlockRunOptions& opts = {});

/// Sum of consecutive records into one.
BlockRecord merge_records(const std::vector<BlockRecord>& records);

/// M(T, H; alpha) = (1/H) int |zeta(1/2+it)|^2 |zeta(1/2+i(t+alpha))|^2 dt over
/// the zero intervals gamma_first .. gamma_last, one value per alpha.
std::vector<double> shifted_fourth_moment(const ZeroList& zeros, std::size_t first, std::size_t last,
                                          const std::vector<double>& alphas, const AccuracyStandard& std,
                                          unsigned workers = 1, std::vector<std::string>* flaws = nullptr);

struct BlockFile {
  std::string base = "0";
  std::vector<BlockRecord> records;
  std::vector<std::string> comments;
};

std::string render_block_file(const BlockFile& file);
BlockFile parse_block_file(const std::string& text);
void write_block_file(const BlockFile& file, const std::filesystem::path& path);
BlockFile read_block_file(const std::filesystem::path& path);

}  // namespace zm::moments
