#include "zetamoments/error.hpp"
#include "zetamoments/specfun.hpp"
#include "zetamoments/zeta_eval.hpp"
#include "zetamoments/zeros.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace zeta = zm::zeta;

TEST_CASE("Euler-Maclaurin at analytic points") {
  const auto z2 = zeta::zeta_euler_maclaurin({2.0, 0.0}, 20, 10);
  CHECK(std::abs(z2.value - std::numbers::pi * std::numbers::pi / 6) < 1e-12);
  CHECK(z2.quality.abs_error_bound < 1e-12);

  const auto zh = zeta::zeta_euler_maclaurin({0.5, 0.0}, 20, 10);
  const double ref = static_cast<double>(zm::oracle::zeta_half());
  CHECK(ref == doctest::Approx(-1.460354508).epsilon(1e-9));
  CHECK(std::abs(zh.value - ref) < 1e-12);

  CHECK_THROWS_AS(zeta::zeta_euler_maclaurin({1.0, 0.0}, 20, 10), zm::DomainError);
  CHECK_THROWS_AS(zeta::zeta_euler_maclaurin({0.5, 1000.0}, 50, 10), zm::DomainError);
}

TEST_CASE("first zero") {
  const auto a = zeta::abs_zeta_line(14.1347251417347L, 1e-9);
  CHECK(a.value < 1e-9);
  CHECK(a.quality_met);
  // no zero between the first two: positive peak near 17.8
  CHECK(zeta::abs_zeta_line(17.8L, 1e-9).value > 0.1);
  CHECK(zeta::hardy_z(17.8L).value > 0.0);
}

TEST_CASE("Riemann-Siegel domain") {
  CHECK_THROWS_AS(zeta::riemann_siegel_z(14.1347251417347L), zm::DomainError);
  CHECK_THROWS_AS(zeta::riemann_siegel_z(100.0L, 5), zm::DomainError);
  CHECK_THROWS_AS(zeta::riemann_siegel_z(100.0L, -1), zm::DomainError);
}

TEST_CASE("C0 matches its closed form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double p = u(rng);
    if (std::fabs(std::cos(2 * std::numbers::pi * p)) < 0.05) continue;
    const double closed = std::cos(2 * std::numbers::pi * (p * p - p - 1.0 / 16)) / std::cos(2 * std::numbers::pi * p);
    CHECK(zeta::rs_coefficient(0, p) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("Riemann-Siegel against Euler-Maclaurin") {
  SUBCASE("t = 100: agreement within the combined bounds") {
    const auto em = zeta::hardy_z_euler_maclaurin(100.0L);
    for (int K = 0; K <= 4; ++K) {
      const auto rs = zeta::riemann_siegel_z(100.0L, K);
      CHECK(std::fabs(em.value - rs.value) <= em.quality.abs_error_bound + rs.quality.abs_error_bound);
    }
  }
  SUBCASE("t in {1000, 10000}: agreement to 1e-8") {
    for (long double t : {1000.0L, 10000.0L}) {
      const auto em = zeta::hardy_z_euler_maclaurin(t);
      CHECK(std::fabs(em.value - zeta::riemann_siegel_z(t, 4).value) <= 1e-8);
      CHECK(std::fabs(std::fabs(em.value) - zeta::abs_zeta_line(t, 1e-8).value) <= 1e-8);
    }
  }
  SUBCASE("t = 5e6 through the dispatcher") {
    const auto em = zeta::hardy_z_euler_maclaurin(5e6L);
    const auto a = zeta::abs_zeta_line(5e6L, 1e-8);
    CHECK(a.quality_met);
    CHECK(std::fabs(std::fabs(em.value) - a.value) <= 1e-8);
  }
  SUBCASE("random heights") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lt(std::log(100.0), std::log(2e5));
    for (int i = 0; i < 50; ++i) {
      const long double t = std::exp(lt(rng));
      const auto em = zeta::hardy_z_euler_maclaurin(t);
      const auto rs = zeta::riemann_siegel_z(t, 2);
      CHECK(std::fabs(em.value - rs.value) <= em.quality.abs_error_bound + rs.quality.abs_error_bound);
    }
  }
}

TEST_CASE("Z is real: imaginary residue of the rotation") {
  for (long double t : {50.0L, 333.3L, 1000.0L, 25000.0L}) {
    const auto z = zeta::zeta_euler_maclaurin(0.5, t, zeta::euler_maclaurin_terms_for(t), 20);
    const auto split = zm::specfun::theta_split(t);
    const std::complex<double> rot = std::polar(1.0, split.hi) * std::polar(1.0, split.lo);
    CHECK(std::fabs((rot * z.value).imag()) <= 1e-8);
  }
}

TEST_CASE("refined zeros near #1e7 are zeros of Z") {
  const auto& zeros = zm::testing::zeros_near_ten_million();
  REQUIRE(zeros.size() == 2400);
  double worst = 0.0;
  for (std::size_t i = 0; i < zeros.size(); i += 7) {
    worst = std::max(worst, std::fabs(zeta::riemann_siegel_z(zeros.base_value(), zeros.offsets[i], 2).value));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("Z alternates in sign across 10^4 consecutive zeros") {
  const auto& zeros = zm::testing::zeros_from(100'000, 10'001);
  int violations = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
    const double mid = 0.5 * (zeros.offsets[i] + zeros.offsets[i + 1]);
    const double z = zeta::riemann_siegel_z(zeros.base_value(), mid, 2).value;
    if (i > 0 && !(z * prev < 0.0)) ++violations;
    prev = z;
  }
  CHECK(violations == 0);
}

TEST_CASE("quality misses are explicit") {
  const auto a = zeta::abs_zeta_line(1e6L, 1e-30);
  CHECK_FALSE(a.quality_met);
  CHECK(a.quality.abs_error_bound > 1e-30);
}
