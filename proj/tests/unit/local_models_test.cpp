#include "zetamoments/error.hpp"
#include "zetamoments/local_models.hpp"
#include "zetamoments/zeta_eval.hpp"

#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lm = zm::local;
using zm::ZeroList;

namespace {

double direct_abs(const ZeroList& z, double t) {
  return zm::zeta::abs_zeta_line(z.base_value(), t, 1e-8).value;
}

double midpoint(const ZeroList& z, std::size_t n) { return 0.5 * (z.offsets[n] + z.offsets[n + 1]); }

}  // namespace

TEST_CASE("HP is exact at the midpoint and vanishes at its zeros") {
  const auto& z = zm::testing::zeros_near_ten_million();
  const std::size_t n = 1000;
  for (int m : {1, 16, 500}) {
    const double eta = midpoint(z, n);
    const double anchor = direct_abs(z, eta);
    CHECK(lm::hp_approx(eta, n, z, m, anchor) == doctest::Approx(anchor).epsilon(1e-12));
    CHECK(lm::hp_approx(z.offsets[n], n, z, m, anchor) == 0.0);
    CHECK(lm::hp_approx(z.offsets[n + 1], n, z, m, anchor) == 0.0);
    const lm::HadamardWindow win(z, n, m);
    for (std::size_t j = n - m + 1; j <= n + m; ++j) CHECK(win.ratio(z.offsets[j]) == 0.0);
  }
  CHECK_THROWS_AS(lm::require_window(z, 10, 64), zm::DomainError);
  CHECK_THROWS_AS(lm::require_window(z, z.size() - 5, 64), zm::DomainError);
}

TEST_CASE("HP against direct evaluation near zero #1e7") {
  const auto& z = zm::testing::zeros_near_ten_million();
  int checked = 0;
  for (std::size_t n = 800; n < 1600; n += 40) {
    const double t = midpoint(z, n) + 0.3 * (z.offsets[n + 1] - z.offsets[n]);
    const double anchor = direct_abs(z, midpoint(z, n));
    const double d = direct_abs(z, t);
    const double err = std::fabs(lm::hp_approx(t, n, z, 64, anchor) - d);
    // the model error scales with |zeta|; the absolute bound applies below the HP threshold
    if (anchor <= 7.0) CHECK(err < 0.05);
    CHECK(err < 5e-3 * std::max(anchor, d));
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("HP is translation invariant") {
  ZeroList a;
  a.base = "0";
  for (int i = 0; i < 200; ++i) a.offsets.push_back(100.0 + 0.7 * i + 0.2 * std::sin(i * 1.3));
  ZeroList b = a;
  for (double& x : b.offsets) x += 4096.0;
  const std::size_t n = 100;
  for (double f : {0.1, 0.37, 0.8}) {
    const double ta = a.offsets[n] + f * (a.offsets[n + 1] - a.offsets[n]);
    const double ha = lm::hp_approx(ta, n, a, 64, 2.5);
    const double hb = lm::hp_approx(ta + 4096.0, n, b, 64, 2.5);
    CHECK(hb == doctest::Approx(ha).epsilon(1e-10));
  }
}

TEST_CASE("P_X") {
  CHECK(lm::EulerFactor(2.0).terms() == 0);
  CHECK(lm::ehp_PX(5e6L, 2.0) == 1.0);
  CHECK(lm::EulerFactor(6.0).terms() == 4);
  CHECK_THROWS_AS(lm::EulerFactor(1.9), zm::DomainError);

  const auto& z = zm::testing::zeros_near_ten_million();
  std::vector<double> means;
  for (double X : {6.0, 50.92, 1000.0}) {
    const lm::EulerFactor px(X);
    double s = 0.0;
    for (std::size_t n = 0; n < 1000; ++n) s += px(z.base_value() + midpoint(z, n));
    means.push_back(s / 1000);
  }
  CHECK(means[0] < means[1]);
  CHECK(means[1] < means[2]);
}

TEST_CASE("Z_X") {
  const auto& z = zm::testing::zeros_near_ten_million();
  const std::size_t n = 1200;
  CHECK(lm::ehp_ZX(z.offsets[n], n, z, 32, 6.0) == 0.0);
  CHECK(lm::ehp_ZX(z.offsets[n] + 1e-9, n, z, 32, 6.0) < 1e-6);
  CHECK(lm::ehp_ZX(midpoint(z, n), n, z, 0, 6.0) == 1.0);

  ZeroList pair;
  pair.base = "0";
  pair.offsets = {10.0, 11.0};
  for (double x : {0.1, 0.25, 0.4}) {
    CHECK(lm::ehp_ZX(10.5 + x, 0, pair, 1, 6.0) == doctest::Approx(lm::ehp_ZX(10.5 - x, 0, pair, 1, 6.0)).epsilon(1e-14));
  }
}

TEST_CASE("EHP normalisation and agreement") {
  const auto& z = zm::testing::zeros_near_ten_million();
  const zm::specfun::SmoothingKernel kernel;
  const std::size_t n = 1100;
  const double anchor = direct_abs(z, midpoint(z, n));
  CHECK(lm::ehp_approx(midpoint(z, n), n, z, 32, 6.0, kernel, true, anchor) == doctest::Approx(anchor).epsilon(1e-12));
  CHECK_THROWS_AS(lm::ehp_approx(midpoint(z, n), n, z, 32, 6.0, kernel, true), zm::DomainError);

  int total = 0, within = 0;
  for (std::size_t k = 900; k < 1300; k += 4) {
    for (double f : {0.2, 0.5, 0.8}) {
      const double t = z.offsets[k] + f * (z.offsets[k + 1] - z.offsets[k]);
      const double e = lm::ehp_approx(t, k, z, 32, 6.0, kernel, false);
      const double d = direct_abs(z, t);
      ++total;
      CHECK(std::isfinite(e));
      CHECK(e > 0.0);
      if (e <= 3 * d && d <= 3 * e) ++within;
    }
  }
  CHECK(within >= 0.95 * total);
}

TEST_CASE("experiment grid and errors") {
  for (double gap : {0.01, 0.3, 0.9, 2.5}) CHECK(lm::grid_points(gap, 0.4) % 2 == 1);

  const auto& z = zm::testing::zeros_near_ten_million();
  const auto grid = lm::build_grid(z, 600, 60);
  for (std::size_t i = 0; i < grid.count; ++i) {
    REQUIRE(grid.x[i].size() % 2 == 1);
    CHECK(grid.x[i][grid.x[i].size() / 2] == 0.0);
  }

  std::vector<lm::LocalModelConfig> cfgs;
  for (int m : {2, 4, 8, 16, 32, 64, 128, 256}) cfgs.push_back({lm::ModelKind::hp, m});
  lm::LocalModelConfig ehpn{lm::ModelKind::ehp_normalized, 16, 6.0};
  cfgs.push_back(ehpn);
  const auto results = lm::run_experiment(z, 600, 60, cfgs, "e1");
  REQUIRE(results.size() == cfgs.size());

  int inversions = 0;
  for (std::size_t i = 1; i < 8; ++i) {
    if (results[i].linf_error >= results[i - 1].linf_error) ++inversions;
  }
  CHECK(inversions <= 1);

  // midpoints contribute no error for HP and normalized EHP
  for (const auto& r : results) {
    for (const auto& cfg : {r.config}) {
      if (cfg.model == lm::ModelKind::ehp) continue;
      const auto one = lm::run_experiment(z, lm::ExperimentGrid{[&] {
                                            auto g = grid;
                                            for (auto& x : g.x) x = {0.0};
                                            for (std::size_t i = 0; i < g.count; ++i) {
                                              g.reference[i] = {grid.reference[i][grid.x[i].size() / 2]};
                                            }
                                            return g;
                                          }()},
                                          cfg, "mid");
      CHECK(one.linf_error <= 1e-12 * 10);
    }
  }

  const auto threaded = lm::run_experiment(z, 600, 60, cfgs, "e1", 3);
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    CHECK(threaded[i].linf_error == results[i].linf_error);
    CHECK(threaded[i].interval_max_errors == results[i].interval_max_errors);
  }
}

TEST_CASE("convergence rates") {
  const auto halving = lm::convergence_rates({8, 4, 2, 1, 0.5});
  CHECK_FALSE(halving[0].has_value());
  for (std::size_t i = 1; i < halving.size(); ++i) CHECK(*halving[i] == doctest::Approx(1.0));
  const auto flat = lm::convergence_rates({3, 3, 3});
  CHECK(*flat[2] == 0.0);
  const auto zero = lm::convergence_rates({1, 0, 1});
  CHECK_FALSE(zero[1].has_value());
  CHECK_FALSE(zero[2].has_value());
}
