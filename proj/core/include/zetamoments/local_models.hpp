#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zetamoments/specfun.hpp"
#include "zetamoments/zeros.hpp"

namespace zm::local {

// Ordinates t below are offsets relative to ZeroList::base unless a
// parameter is named `height`. Interval n is (zeros[n], zeros[n+1]) and the
// window of m zeros per side is zeros[n-m+1] .. zeros[n+m].

enum class ModelKind { hp, ehp, ehp_normalized };
std::string to_string(ModelKind k);

struct LocalModelConfig {
  ModelKind model = ModelKind::hp;
  int m = 16;
  double X = 6.0;  ///< EHP only
  specfun::SmoothingKernel kernel{};

  void validate() const;
  std::string label() const;
};

/// Q^{n,m}(t) / Q^{n,m}(eta_n) for the product of |t - gamma_j| over the window,
/// accumulated in blocks of ratios so m = 500 neither overflows nor pays one
/// logarithm per zero.
class HadamardWindow {
 public:
  HadamardWindow(const ZeroList& zeros, std::size_t n, int m);

  double midpoint() const noexcept { return eta_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  /// Ratio at t = midpoint() + x.
  double ratio_at(double x) const;
  double ratio(double t) const { return ratio_at(t - eta_); }

 private:
  double eta_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> d_;  ///< gamma_j - eta
  std::vector<double> inv_d_;
};

/// Throws DomainError when the window runs off the zero list.
void require_window(const ZeroList& zeros, std::size_t n, int m);

/// HP: anchor * Q(t) / Q(eta_n), anchor = |zeta(1/2 + i eta_n)|.
double hp_approx(double t, std::size_t n, const ZeroList& zeros, int m, double anchor);

/// exp(sum_{n <= X} Lambda(n) cos(t log n) n^{-1/2} / log n * v(e^{log n / log X})),
/// with the prime-power weights tabulated once.
class EulerFactor {
 public:
  EulerFactor(double X, specfun::SmoothingKernel kernel = {});

  double log_value(long double height) const;
  double operator()(long double height) const;
  std::size_t terms() const noexcept { return log_n_.size(); }

 private:
  std::vector<long double> log_n_;
  std::vector<double> weight_;
};

double ehp_PX(long double height, double X, const specfun::SmoothingKernel& kernel = {});

/// exp(sum_j Ci(|t - gamma_j| log X)) with the standard cosine integral; this
/// is |exp(-sum_j E1(i (t - gamma_j) log X))| and vanishes at every zero of the
/// window. Exactly 0 when t hits an included ordinate.
double ehp_ZX(double t, std::size_t n, const ZeroList& zeros, int m, double X);

/// |P_X Z_X| at t; when normalized it is rescaled to equal `anchor` at eta_n.
double ehp_approx(double t, std::size_t n, const ZeroList& zeros, int m, double X,
                  const specfun::SmoothingKernel& kernel, bool normalized,
                  std::optional<double> anchor = std::nullopt);

/// l(n) = 2 floor(10 gap / mean_gap + 1) + 1.
int grid_points(double gap, double mean_gap);

struct ExperimentResult {
  std::string experiment_id;
  LocalModelConfig config;
  double linf_error = 0.0;
  std::size_t grid_points_used = 0;
  std::vector<double> interval_max_errors;
  std::size_t skipped_intervals = 0;
};

/// Grid and direct |zeta| reference for `count` intervals starting at `first`.
struct ExperimentGrid {
  std::size_t first = 0;
  std::size_t count = 0;
  /// Per interval: abscissas as offsets from the midpoint; the centre entry is 0.
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> reference;
  std::vector<bool> skipped;
  std::size_t points = 0;
};

ExperimentGrid build_grid(const ZeroList& zeros, std::size_t first, std::size_t count, unsigned workers = 1);

ExperimentResult run_experiment(const ZeroList& zeros, const ExperimentGrid& grid, const LocalModelConfig& cfg,
                                const std::string& id, unsigned workers = 1);
std::vector<ExperimentResult> run_experiment(const ZeroList& zeros, std::size_t first, std::size_t count,
                                             const std::vector<LocalModelConfig>& cfgs, const std::string& id,
                                             unsigned workers = 1);

/// C_r = (log E_r - log E_{r-1}) / log(1/2) for m = 2^r; entry 0 and any entry
/// touching a non-positive error are empty.
std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors);

/// Text table per model: one row per m with the L-infinity error averaged over
/// the experiments given and the convergence rate against the previous m.
std::string render_experiment_report(const std::vector<ExperimentResult>& results);

}  // namespace zm::local
