#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace zm::oracle {

namespace mp = boost::multiprecision;
using Complex50 = mp::cpp_complex_50;
using Complex100 = mp::cpp_complex_100;

Real50 euler_gamma() {
  const int n = 1000;
  Real50 h = 0;
  for (int j = n; j >= 1; --j) h += Real50(1) / j;
  Real50 g = h - log(Real50(n)) - Real50(1) / (2 * n);
  // + sum_j B_{2j} / (2j n^{2j})
  Real50 n2j = Real50(n) * n;
  for (int j = 1; j <= 12; ++j) {
    g += boost::math::bernoulli_b2n<Real50>(j) / (Real50(2 * j) * n2j);
    n2j *= Real50(n) * n;
  }
  return g;
}

namespace {

Complex50 log_gamma(Complex50 z) {
  Complex50 shift = 0;
  while (abs(z) < 40) {
    shift += log(z);
    z += 1;
  }
  const Real50 half_log_2pi = log(2 * boost::math::constants::pi<Real50>()) / 2;
  Complex50 s = (z - Real50(0.5)) * log(z) - z + half_log_2pi;
  Complex50 zp = z;
  const Complex50 z2 = z * z;
  for (int j = 1; j <= 30; ++j) {
    s += boost::math::bernoulli_b2n<Real50>(j) / (Real50(2 * j) * (2 * j - 1) * zp);
    zp *= z2;
  }
  return s - shift;
}

}  // namespace

Real50 theta(const Real50& t) {
  const Real50 pi = boost::math::constants::pi<Real50>();
  const Complex50 z(Real50(0.25), t / 2);
  return log_gamma(z).imag() - t / 2 * log(pi);
}

Real50 gram_point(long n) {
  const Real50 target = boost::math::constants::pi<Real50>() * n;
  Real50 lo = 10, hi = 20;
  while (theta(hi) < target) {
    lo = hi;
    hi *= 2;
  }
  for (int i = 0; i < 200; ++i) {
    const Real50 mid = (lo + hi) / 2;
    (theta(mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

std::complex<double> expint_e1(std::complex<double> zd) {
  const Complex100 z(Real100(zd.real()), Real100(zd.imag()));
  const Real100 gamma(euler_gamma());
  Complex100 term = 1;
  Complex100 sum = 0;
  for (int k = 1; k < 2000; ++k) {
    term *= -z / Real100(k);
    const Complex100 add = term / Real100(k);
    sum += add;
    if (k > abs(z) && abs(add) < Real100("1e-60")) break;
  }
  const Complex100 r = -gamma - log(z) - sum;
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

double cosine_integral(double xd) {
  const Real100 x(xd);
  const Real100 x2 = x * x;
  Real100 term = 1;  // (-1)^k x^{2k} / (2k)!
  Real100 sum = 0;
  for (int k = 1; k < 2000; ++k) {
    term *= -x2 / (Real100(2 * k - 1) * (2 * k));
    const Real100 add = term / (2 * k);
    sum += add;
    if (k > x && abs(add) < Real100("1e-60")) break;
  }
  return static_cast<double>(Real100(euler_gamma()) + log(x) + sum);
}

Real50 zeta_half() {
  const int n = 80;
  Real50 d = pow(3 + sqrt(Real50(8)), n);
  d = (d + 1 / d) / 2;
  Real50 b = -1, c = -d, s = 0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c / sqrt(Real50(k + 1));
    b = Real50(k + n) * (k - n) * b / ((Real50(k) + Real50(0.5)) * (k + 1));
  }
  const Real50 eta = s / d;
  return eta / (1 - sqrt(Real50(2)));
}

long double arithmetic_factor(int k, std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  const int m = k - 1;
  std::vector<long double> binom2(m + 1);
  long double c = 1;
  for (int j = 0; j <= m; ++j) {
    binom2[j] = c * c;
    c = c * (m - j) / (j + 1);
  }
  long double log_a = 0;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    const long double x = 1.0L / *it;
    long double poly = 0;
    for (int j = m; j >= 0; --j) poly = poly * x + binom2[j];
    log_a += static_cast<long double>(m) * m * std::log1p(-x) + std::log(poly);
  }
  const long double P = primes.back();
  log_a -= static_cast<long double>(k) * k * m * m / 4 / (P * std::log(P));
  return std::exp(log_a);
}

Real50 cue_moment(std::uint64_t N, int k) {
  Real50 r = 1;
  for (std::uint64_t j = 0; j < N; ++j) {
    for (int i = 1; i <= k; ++i) r *= Real50(j + k + i) / Real50(j + i);
  }
  return r;
}

QuadratureReference integrate(const std::function<double(double)>& f, double a, double b) {
  QuadratureReference q;
  q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15, &q.error);
  return q;
}

}  // namespace zm::oracle
