#include "zetamoments/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zetamoments/error.hpp"
#include "zetamoments/io.hpp"
#include "zetamoments/summation.hpp"

namespace zm::stats {

std::vector<RatioSample> ratios(const moments::BlockFile& file, double two_k,
                                const predict::PredictionPolynomial& poly, std::size_t group, bool leading_only,
                                std::vector<std::string>* log) {
  if (group == 0) throw DomainError("ratio group size must be positive");
  const HeightValue base(file.base, 0.0);
  std::vector<RatioSample> out;
  std::size_t i = 0;
  const auto& recs = file.records;
  while (i + group <= recs.size()) {
    bool contiguous = true;
    std::size_t broken = 0;
    for (std::size_t j = i + 1; j < i + group; ++j) {
      if (recs[j].alpha != recs[j - 1].beta) {
        contiguous = false;
        broken = j;
        break;
      }
    }
    if (!contiguous) {
      if (log) {
        log->push_back("skipped group starting at zero " + std::to_string(recs[i].first_index) +
                       ": records not contiguous");
      }
      i = broken;
      continue;
    }
    CompensatedSum<double> num;
    std::size_t zeros = 0;
    for (std::size_t j = i; j < i + group; ++j) {
      const auto it = recs[j].moments.find(two_k);
      if (it == recs[j].moments.end()) throw DomainError("block record lacks the requested exponent");
      num.add(it->second);
      zeros += recs[j].count;
    }
    RatioSample s;
    s.two_k = two_k;
    s.first_index = recs[i].first_index;
    s.zeros = zeros;
    s.numerator = num.value();
    s.denominator =
        predict::prediction_integral(base.shifted(recs[i].alpha), base.shifted(recs[i + group - 1].beta), poly,
                                     leading_only);
    if (!(s.denominator > 0.0)) throw DomainError("prediction integral is not positive");
    s.ratio = s.numerator / s.denominator;
    out.push_back(s);
    i += group;
  }
  return out;
}

std::vector<double> ratio_values(const std::vector<RatioSample>& rs) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r.ratio);
  return out;
}

SummaryStats summarize(const std::vector<double>& xs) {
  if (xs.empty()) throw DomainError("cannot summarize an empty sample");
  SummaryStats s;
  s.count = xs.size();
  s.mean = compensated_sum(xs) / static_cast<double>(xs.size());
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  CompensatedSum<double> ss;
  for (double x : xs) ss.add((x - s.mean) * (x - s.mean));
  s.sd = std::sqrt(ss.value() / static_cast<double>(xs.size()));
  // Rounding can push the mean a hair outside [min, max] for constant samples.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::vector<double> standardized_moments(const std::vector<double>& xs, int p_max) {
  const SummaryStats s = summarize(xs);
  if (!(s.sd > 0.0)) throw DomainError("degenerate sample: zero variance");
  std::vector<double> out;
  for (int p = 3; p <= p_max; ++p) {
    CompensatedSum<double> acc;
    for (double x : xs) acc.add(std::pow((x - s.mean) / s.sd, p));
    out.push_back(acc.value() / static_cast<double>(xs.size()));
  }
  return out;
}

SummaryStats log_ratio_stats(const std::vector<double>& ratios) {
  std::vector<double> logs;
  logs.reserve(ratios.size());
  for (double r : ratios) {
    if (!(r > 0.0)) throw DomainError("log of a non-positive ratio");
    logs.push_back(std::log(r));
  }
  return summarize(logs);
}

Autocovariance autocovariance(const std::vector<double>& xs, std::size_t max_lag) {
  const std::size_t R = xs.size();
  if (max_lag >= R) throw DomainError("autocovariance lag must be below the sample size");
  const double mean = compensated_sum(xs) / static_cast<double>(R);
  Autocovariance out;
  out.c.resize(max_lag + 1);
  out.rho.resize(max_lag + 1);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    CompensatedSum<double> acc;
    for (std::size_t r = 0; r + m < R; ++r) acc.add((xs[r + m] - mean) * (xs[r] - mean));
    out.c[m] = acc.value() / static_cast<double>(R);
  }
  for (std::size_t m = 0; m <= max_lag; ++m) out.rho[m] = out.c[0] > 0.0 ? out.c[m] / out.c[0] : 0.0;
  return out;
}

SortedContributions sorted_contributions(const std::vector<double>& xs, std::size_t n_max) {
  if (xs.empty()) throw DomainError("no contributions to sort");
  SortedContributions out;
  out.order.resize(xs.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
  out.y.reserve(xs.size());
  for (std::size_t i : out.order) out.y.push_back(xs[i]);
  const std::size_t nf = std::min(n_max, xs.size());
  for (std::size_t n = 0; n < nf; ++n) out.f.push_back(out.y[n] / out.y[0]);
  const double total = compensated_sum(out.y);
  CompensatedSum<double> run;
  for (std::size_t n = 0; n < out.y.size(); ++n) {
    run.add(out.y[n]);
    out.cumulative_percent.push_back(std::min(100.0, 100.0 * run.value() / total));
  }
  out.cumulative_percent.back() = 100.0;
  return out;
}

double power_law(double n, double k) { return std::pow(n, -k / 5.0); }

double extreme_exponent_prediction(long double T, double M) {
  if (!(T > std::exp(1.0L)) || !(M > 1.0)) throw DomainError("need T > e and M > 1");
  return 0.5 * std::sqrt(static_cast<double>(std::log(std::log(T))) / std::log(M));
}

double kernel_K(long double T, double alpha) {
  if (!(T > 1.0L)) throw DomainError("kernel_K needs T > 1");
  const double x = alpha * static_cast<double>(std::log(T));
  if (std::fabs(x) < 1.0) {
    // K = 24 sum_{j>=2} (-1)^j x^{2j-4} / (2j)!; the closed form cancels badly here
    const double x2 = x * x;
    double term = 1.0 / 24.0, sum = 0.0;
    for (int j = 2; std::fabs(term) > 1e-18; ++j) {
      sum += term;
      term *= -x2 / ((2.0 * j + 1) * (2.0 * j + 2));
    }
    return 24.0 * sum;
  }
  const double s = std::sin(0.5 * x);
  return 12.0 / (x * x) * (1.0 - 4.0 * s * s / (x * x));
}

std::vector<KernelRow> kernel_comparison(const ZeroList& zeros, std::size_t first, std::size_t last,
                                         const std::vector<double>& alphas, const moments::AccuracyStandard& std,
                                         unsigned workers, std::vector<std::string>* flaws) {
  std::vector<double> all{0.0};
  for (double a : alphas) {
    if (a != 0.0) all.push_back(a);
  }
  const std::vector<double> m = moments::shifted_fourth_moment(zeros, first, last, all, std, workers, flaws);
  const long double T = zeros.ordinate(first);
  std::vector<KernelRow> out;
  for (double a : alphas) {
    const auto pos = a == 0.0 ? 0 : static_cast<std::size_t>(std::find(all.begin(), all.end(), a) - all.begin());
    out.push_back({a, m[pos] / m[0], kernel_K(T, a)});
  }
  return out;
}

std::vector<double> alpha_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("alpha grid needs step > 0 and hi >= lo");
  std::vector<double> out;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::string render_plot_data(const std::string& figure, const std::vector<std::string>& header,
                             const std::vector<std::pair<double, double>>& points) {
  std::string out = "# figure=" + figure + "\n";
  for (const auto& h : header) out += "# " + h + "\n";
  for (const auto& [x, y] : points) out += io::format_double(x, 12) + " " + io::format_double(y, 12) + "\n";
  return out;
}

void write_plot_data(const std::filesystem::path& path, const std::string& figure,
                     const std::vector<std::string>& header, const std::vector<std::pair<double, double>>& points) {
  io::write_text(path, render_plot_data(figure, header, points));
}

}  // namespace zm::stats
