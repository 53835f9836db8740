#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "zetamoments/moments.hpp"
#include "zetamoments/predictions.hpp"

namespace zm::stats {

struct RatioSample {
  double two_k = 0.0;
  std::uint64_t first_index = 0;
  std::size_t zeros = 0;
  double numerator = 0.0;    ///< empirical integral over the grouped span
  double denominator = 0.0;  ///< prediction integral over the same span
  double ratio = 0.0;
};

/// Groups `group` consecutive records, sums their 2k moments and divides by
/// the prediction integral over [alpha_first, beta_last]. A group that would
/// straddle a discontinuity (beta != next alpha) is dropped and logged.
std::vector<RatioSample> ratios(const moments::BlockFile& file, double two_k,
                                const predict::PredictionPolynomial& poly, std::size_t group,
                                bool leading_only = false, std::vector<std::string>* log = nullptr);

struct SummaryStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double sd = 0.0;  ///< population standard deviation about the sample mean
  std::size_t count = 0;
};

SummaryStats summarize(const std::vector<double>& xs);
std::vector<double> ratio_values(const std::vector<RatioSample>& rs);

/// (1/n) sum z^p for p = 3 .. p_max with z standardized to mean 0 and
/// population variance 1. Throws DomainError on a constant sample.
std::vector<double> standardized_moments(const std::vector<double>& xs, int p_max);

/// summarize() of log x; every ratio must be positive.
SummaryStats log_ratio_stats(const std::vector<double>& ratios);

struct Autocovariance {
  std::vector<double> c;    ///< c_0 .. c_max_lag
  std::vector<double> rho;  ///< c_m / c_0
};

/// c_m = (1/R) sum_{r=1}^{R-m} (x_{r+m} - mean)(x_r - mean).
Autocovariance autocovariance(const std::vector<double>& xs, std::size_t max_lag);

struct SortedContributions {
  std::vector<double> y;                   ///< descending
  std::vector<std::size_t> order;          ///< original index of y[i]
  std::vector<double> f;                   ///< y_n / y_1 for n = 1 .. n_max
  std::vector<double> cumulative_percent;  ///< share of the total in the n largest, n = 1 .. size
};

SortedContributions sorted_contributions(const std::vector<double>& xs, std::size_t n_max);

/// n^{-k/5}.
double power_law(double n, double k);

/// (1/2) sqrt(log log T / log M).
double extreme_exponent_prediction(long double T, double M);

/// 12/x^2 (1 - 4 sin^2(x/2)/x^2) with x = alpha log T; series below |x| = 1e-4.
double kernel_K(long double T, double alpha);

struct KernelRow {
  double alpha = 0.0;
  double ratio = 0.0;  ///< M(T, H; alpha) / M(T, H; 0)
  double K = 0.0;
};

/// Shifted fourth moments over the zero span first..last against K(T; alpha)
/// with T = gamma_first.
std::vector<KernelRow> kernel_comparison(const ZeroList& zeros, std::size_t first, std::size_t last,
                                         const std::vector<double>& alphas, const moments::AccuracyStandard& std,
                                         unsigned workers = 1, std::vector<std::string>* flaws = nullptr);

/// lo, lo + step, ... up to hi inclusive (computed as lo + i step).
std::vector<double> alpha_grid(double lo, double hi, double step);

/// Two-column plot data with '#' header lines, the first naming the figure.
std::string render_plot_data(const std::string& figure, const std::vector<std::string>& header,
                             const std::vector<std::pair<double, double>>& points);
void write_plot_data(const std::filesystem::path& path, const std::string& figure,
                     const std::vector<std::string>& header, const std::vector<std::pair<double, double>>& points);

}  // namespace zm::stats
