#include "zetamoments/error.hpp"
#include "zetamoments/specfun.hpp"
#include "zetamoments/zeros.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace sf = zm::specfun;
namespace oracle = zm::oracle;

TEST_CASE("euler gamma matches the harmonic-number oracle") {
  const double ref = static_cast<double>(oracle::euler_gamma());
  CHECK(std::fabs(sf::euler_gamma() - ref) <= 1e-16);
  CHECK(2 * sf::euler_gamma() - 1 == doctest::Approx(0.1544313298).epsilon(1e-10));
}

TEST_CASE("theta against the 50-digit log-gamma oracle") {
  SUBCASE("t = 1000") {
    const auto ref = oracle::theta(oracle::Real50(1000));
    CHECK(std::fabs(static_cast<double>(sf::theta(1000.0L) - static_cast<long double>(ref))) < 1e-10);
  }
  SUBCASE("below the Stirling switch") {
    for (double t : {0.5, 1.0, 5.0, 9.5}) {
      const auto ref = static_cast<double>(oracle::theta(oracle::Real50(t)));
      CHECK(sf::theta(t) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  SUBCASE("quad split keeps absolute accuracy at desk heights") {
    for (const char* base : {"4000000", "1000000000"}) {
      const double offset = 992103.6356253359;
      const auto ref = oracle::theta(oracle::Real50(base) + oracle::Real50(offset));
      const auto split = sf::theta_split(std::stold(base), offset);
      const double err = static_cast<double>(oracle::Real50(split.hi) + oracle::Real50(split.lo) - ref);
      CHECK(std::fabs(err) < 1e-12);
    }
  }
  CHECK_THROWS_AS(sf::theta(0.0), zm::DomainError);
}

TEST_CASE("Gram point zero against a bisection oracle") {
  const auto g0 = oracle::gram_point(0);
  CHECK(std::fabs(static_cast<double>(zm::gram_point_value(0) - static_cast<long double>(g0))) < 1e-10);
  CHECK(static_cast<double>(g0) == doctest::Approx(17.8455995405).epsilon(1e-11));
}

TEST_CASE("E1 on the real axis") {
  const auto ref = oracle::expint_e1({1.0, 0.0});
  CHECK(sf::expint_e1(1.0) == doctest::Approx(ref.real()).epsilon(1e-12));
  CHECK(sf::expint_e1(1.0) == doctest::Approx(0.219383934).epsilon(1e-9));
  double prev = sf::expint_e1(0.01);
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.01 + 0.3 * i;
    const double v = sf::expint_e1(x);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(sf::expint_e1(std::complex<double>(0.0, 0.0)), zm::DomainError);
}

TEST_CASE("E1 in the right half plane against the 100-digit series") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> re(0.0, 25.0), im(-25.0, 25.0);
  for (int i = 0; i < 200; ++i) {
    const std::complex<double> z(re(rng), im(rng));
    if (std::abs(z) < 0.01) continue;
    const auto ref = oracle::expint_e1(z);
    const auto got = sf::expint_e1(z);
    CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref) + 1e-300);
  }
}

TEST_CASE("cosine integral") {
  const double eps = 1e-6;
  CHECK(std::fabs(sf::cosine_integral(eps) - (sf::euler_gamma() + std::log(eps))) < 1e-12);
  CHECK(sf::cosine_integral(1.0) == doctest::Approx(oracle::cosine_integral(1.0)).epsilon(1e-13));
  CHECK(sf::cosine_integral(1.0) == doctest::Approx(0.337403922).epsilon(1e-9));
  for (double x = 10.0; x < 1000.0; x *= 1.37) CHECK(std::fabs(sf::cosine_integral(x)) <= 2.0 / x);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(std::fabs(sf::cosine_integral(x) - oracle::cosine_integral(x)) < 1e-12);
  }
  CHECK_THROWS_AS(sf::cosine_integral(0.0), zm::DomainError);
  CHECK_THROWS_AS(sf::cosine_integral(-1.0), zm::DomainError);
}

TEST_CASE("E1 and Ci agree on the imaginary axis") {
  for (double y : {0.5, 1.0, 5.0}) CHECK(sf::expint_e1({0.0, y}).real() == doctest::Approx(-sf::cosine_integral(y)));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double y = u(rng);
    const auto e = sf::expint_e1({0.0, y});
    if (std::fabs(e.real() + sf::cosine_integral(y)) > 1e-10) ++violations;
    if (std::fabs(e.imag() - (-sf::kPi / 2 + sf::sine_integral(y))) > 1e-10) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("smoothing kernel") {
  sf::SmoothingKernel k6;
  CHECK(sf::kernel_v(std::exp(std::log(2.0) / std::log(6.0)), k6) == 1.0);
  CHECK(sf::kernel_v(std::exp(1.0), k6) == 0.0);
  CHECK(k6.support_lo() == doctest::Approx(std::exp(5.0 / 6.0)));
  CHECK(k6.support_hi() == doctest::Approx(std::exp(1.0)));

  for (double X : {2.0, 6.0, 50.92, 1000.0}) {
    sf::SmoothingKernel k;
    k.X = X;
    const auto mass = oracle::integrate([&](double x) { return sf::kernel_u(x, k); }, k.support_lo(), k.support_hi());
    CHECK(std::fabs(mass.value - 1.0) < 1e-10);
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = k.support_lo() * 0.99 + (k.support_hi() * 1.01 - k.support_lo() * 0.99) * i / 200.0;
      const double v = sf::kernel_v(t, k);
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("special functions are pure") {
  for (double t : {31.5, 1234.5, 4.99e6}) {
    CHECK(sf::theta(t) == sf::theta(t));
    CHECK(sf::cosine_integral(t) == sf::cosine_integral(t));
  }
}
