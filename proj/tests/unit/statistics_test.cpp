#include "zetamoments/error.hpp"
#include "zetamoments/moments.hpp"
#include "zetamoments/predictions.hpp"
#include "zetamoments/statistics.hpp"

#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace st = zm::stats;
namespace mom = zm::moments;
namespace pr = zm::predict;

namespace {

// Contiguous records whose moments are the prediction integrals themselves.
mom::BlockFile prediction_file(const pr::PredictionPolynomial& poly, double two_k, std::size_t n) {
  mom::BlockFile f;
  f.base = "4000000";
  double alpha = 992103.5;
  for (std::size_t i = 0; i < n; ++i) {
    mom::BlockRecord r;
    r.first_index = 9'999'400 + 1000 * i;
    r.count = 1000;
    r.alpha = alpha;
    r.beta = alpha + 462.5 + 3.0 * std::sin(static_cast<double>(i));
    r.moments[two_k] = pr::prediction_integral(4e6L + r.alpha, 4e6L + r.beta, poly);
    r.errors[two_k] = 0.0;
    f.records.push_back(r);
    alpha = r.beta;
  }
  return f;
}

}  // namespace

TEST_CASE("self ratios are identically one") {
  for (int k : {1, 2}) {
    const auto poly = pr::polynomial_P(k);
    const auto file = prediction_file(poly, 2.0 * k, 100);
    for (std::size_t g : {1u, 10u, 100u}) {
      const auto rs = st::ratios(file, 2.0 * k, poly, g);
      CHECK(rs.size() == 100 / g);
      for (const auto& r : rs) CHECK(std::fabs(r.ratio - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("groups straddling a discontinuity are dropped and logged") {
  const auto poly = pr::polynomial_P(1);
  auto file = prediction_file(poly, 2.0, 20);
  file.records[13].alpha += 1.0;
  std::vector<std::string> log;
  const auto rs = st::ratios(file, 2.0, poly, 10, false, &log);
  CHECK(rs.size() == 1);
  CHECK_FALSE(log.empty());
}

TEST_CASE("summaries and standardized moments") {
  const auto s = st::summarize({1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.min == 1);
  CHECK(s.max == 4);
  CHECK(s.sd == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.count == 4);

  CHECK(st::standardized_moments({1, 2, 3}, 3)[0] == doctest::Approx(0.0));
  const auto two_point = st::standardized_moments({-3, 5, -3, 5}, 6);
  CHECK(two_point[0] == doctest::Approx(0.0));  // p = 3
  CHECK(two_point[1] == doctest::Approx(1.0));  // p = 4: z = +-1, so the variance normalization is exact
  CHECK_THROWS_AS(st::standardized_moments({2, 2, 2}, 4), zm::DomainError);

  std::mt19937_64 rng(42);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  std::vector<double> xs(100'000);
  for (auto& x : xs) x = ln(rng);
  long double mean = 0, m2 = 0, m3 = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  for (double x : xs) {
    const long double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= xs.size();
  m3 /= xs.size();
  const double brute = static_cast<double>(m3 / std::pow(m2, 1.5L));
  CHECK(st::standardized_moments(xs, 3)[0] == doctest::Approx(brute).epsilon(0.1));
}

TEST_CASE("log-ratio statistics") {
  const auto ones = st::log_ratio_stats(std::vector<double>(10, 1.0));
  CHECK(ones.mean == 0.0);
  CHECK(ones.sd == 0.0);
  const std::vector<double> r{1.2, 0.7, 0.99, 1.01, 3.0};
  const auto ls = st::log_ratio_stats(r);
  CHECK(ls.min == doctest::Approx(std::log(0.7)));
  CHECK(ls.max == doctest::Approx(std::log(3.0)));
  CHECK_THROWS_AS(st::log_ratio_stats({1.0, 0.0}), zm::DomainError);
}

TEST_CASE("autocovariance") {
  const auto flat = st::autocovariance(std::vector<double>(50, 3.0), 5);
  for (double c : flat.c) CHECK(c == 0.0);

  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 1.0 : -1.0;
  const auto a = st::autocovariance(alt, 3);
  CHECK(a.rho[1] == doctest::Approx(-1.0).epsilon(2.0 / 1000));
  CHECK(a.rho[2] == doctest::Approx(1.0).epsilon(3.0 / 1000));

  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd(5.0, 2.0);
  std::vector<double> xs(4000);
  for (auto& x : xs) x = nd(rng);
  const auto ac = st::autocovariance(xs, 40);
  const auto s = st::summarize(xs);
  CHECK(ac.c[0] == doctest::Approx(s.sd * s.sd).epsilon(1e-12));
  CHECK(ac.rho[0] == 1.0);
  for (std::size_t m = 1; m <= 40; ++m) CHECK(std::fabs(ac.rho[m]) < 3.0 / std::sqrt(4000.0));
  CHECK_THROWS_AS(st::autocovariance(std::vector<double>(10, 1.0), 10), zm::DomainError);
}

TEST_CASE("sorted contributions") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> xs(500);
  for (auto& x : xs) x = ex(rng);
  const auto sc = st::sorted_contributions(xs, 100);
  CHECK(sc.f.size() == 100);
  CHECK(sc.f[0] == 1.0);
  for (std::size_t i = 1; i < sc.f.size(); ++i) CHECK(sc.f[i] <= sc.f[i - 1]);
  for (std::size_t i = 1; i < sc.cumulative_percent.size(); ++i) {
    CHECK(sc.cumulative_percent[i] >= sc.cumulative_percent[i - 1]);
  }
  CHECK(sc.cumulative_percent.size() == xs.size());
  CHECK(sc.cumulative_percent.back() == doctest::Approx(100.0));
  CHECK(xs[sc.order[0]] == sc.y[0]);
  CHECK(sc.y[0] == *std::max_element(xs.begin(), xs.end()));
}

TEST_CASE("reference curves") {
  CHECK(st::power_law(32, 6) == doctest::Approx(0.015625).epsilon(1e-15));
  // (1/2) sqrt(log log 1e22 / log 1.5e6) = (1/2) sqrt(3.9251 / 14.2210)
  CHECK(st::extreme_exponent_prediction(1e22L, 1.5e6) == doctest::Approx(0.26268).epsilon(1e-4));
  CHECK(st::extreme_exponent_prediction(std::exp(std::exp(1.0L)), std::exp(1.0)) == doctest::Approx(0.5));
  CHECK(st::extreme_exponent_prediction(1e22L, 1e7) < st::extreme_exponent_prediction(1e22L, 1e6));

  const long double T = 5e6L;
  const double logT = std::log(5e6);
  CHECK(st::kernel_K(T, 0.0) == 1.0);
  CHECK(st::kernel_K(T, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(st::kernel_K(T, 2 * std::numbers::pi / logT) - 0.303964) < 1e-6);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(std::fabs(st::kernel_K(T, std::numbers::pi / logT) - 12 / pi2 * (1 - 4 / pi2)) < 1e-12);
  // series and closed form meet smoothly at the switch
  CHECK(st::kernel_K(T, 0.999 / logT) == doctest::Approx(st::kernel_K(T, 1.001 / logT)).epsilon(1e-4));
  CHECK(st::kernel_K(T, 1.0 / logT - 1e-17) == doctest::Approx(st::kernel_K(T, 1.0 / logT + 1e-16)).epsilon(1e-13));
  CHECK(st::kernel_K(T, 1e-3 / logT) == doctest::Approx(1 - 1e-6 / 30).epsilon(1e-15));
}

TEST_CASE("alpha grid and plot data") {
  const auto g = st::alpha_grid(0.0, 1.5, 0.03);
  CHECK(g.size() == 51);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(1.5));
  CHECK(st::alpha_grid(0.0, 40.0, 0.5).size() == 81);
  const auto text = st::render_plot_data("smg1", {"alpha vs ratio"}, {{0.0, 1.0}, {0.03, 0.99}});
  CHECK(text.rfind("# figure=smg1\n", 0) == 0);
  CHECK(text.find("0.03") != std::string::npos);
}

TEST_CASE("kernel comparison is exactly one at alpha = 0") {
  const auto& z = zm::testing::zeros_near_ten_million();
  mom::AccuracyStandard s;
  s.T = z.height(0);
  const auto rows = st::kernel_comparison(z, 700, 740, {0.0, 0.3}, s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ratio == 1.0);
  CHECK(rows[0].K == 1.0);
  CHECK(rows[1].ratio > 0.0);
}
