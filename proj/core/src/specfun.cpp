#include "zetamoments/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <quadmath.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "zetamoments/error.hpp"

namespace zm::specfun {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr long double kTwoPiL = 2.0L * kPiL;

// (1 - 2^{1-2k}) |B_2k| / (4k(2k-1)), the coefficients of the theta expansion.
struct ThetaCoefficients {
  static constexpr int kTerms = 24;
  std::array<long double, kTerms + 1> c{};
  ThetaCoefficients() {
    for (int k = 1; k <= kTerms; ++k) {
      const long double b = std::fabs(boost::math::bernoulli_b2n<long double>(k));
      c[k] = (1.0L - std::pow(2.0L, 1 - 2 * k)) * b / (4.0L * k * (2.0L * k - 1.0L));
    }
  }
};

const ThetaCoefficients& theta_coefficients() {
  static const ThetaCoefficients table;
  return table;
}

std::complex<double> e1_series(std::complex<double> z) {
  // E1(z) = -gamma - log z - sum_{n>=1} (-z)^n / (n n!)
  std::complex<double> term = 1.0;
  std::complex<double> sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= -z / static_cast<double>(n);
    const std::complex<double> add = term / static_cast<double>(n);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

std::complex<double> e1_continued_fraction(std::complex<double> z) {
  // E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))), modified Lentz.
  constexpr double tiny = 1e-300;
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int n = 1; n < 5000; ++n) {
    const double a = -static_cast<double>(n) * n;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
  }
  throw ConvergenceError("E1 continued fraction did not converge");
}

double g_unnormalized(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return std::exp(-1.0 / (y * y) - 1.0 / ((1.0 - y) * (1.0 - y)));
}

double bump_normalization() {
  static const double norm = [] {
    // Composite 64-point Gauss-Legendre over 16 panels.
    double total = 0.0;
    constexpr int panels = 16;
    for (int i = 0; i < panels; ++i) {
      const double a = static_cast<double>(i) / panels;
      const double b = static_cast<double>(i + 1) / panels;
      total += boost::math::quadrature::gauss<double, 64>::integrate(g_unnormalized, a, b);
    }
    return total;
  }();
  return norm;
}

}  // namespace

double euler_gamma() noexcept { return kEulerGamma; }

std::complex<double> log_gamma(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma requires Re z > 0");
  std::complex<double> shift = 0.0;
  while (z.real() < 12.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  std::complex<double> power = inv;
  for (int k = 1; k <= 12; ++k) {
    const double b = boost::math::bernoulli_b2n<double>(k);
    series += b / (2.0 * k * (2.0 * k - 1.0)) * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

long double theta(long double t) {
  if (!(t > 0.0L)) throw DomainError("theta requires t > 0");
  if (t < 10.0L) {
    const double td = static_cast<double>(t);
    const std::complex<double> lg = log_gamma({0.25, 0.5 * td});
    return static_cast<long double>(lg.imag() - 0.5 * td * std::log(kPi));
  }
  const auto& coef = theta_coefficients();
  long double value = 0.5L * t * std::log(t / kTwoPiL) - 0.5L * t - kPiL / 8.0L;
  const long double inv = 1.0L / t;
  const long double inv2 = inv * inv;
  long double power = inv;
  for (int k = 1; k <= ThetaCoefficients::kTerms; ++k) {
    const long double term = coef.c[k] * power;
    value += term;
    if (term < 1e-18L) break;
    power *= inv2;
  }
  return value;
}

double theta(double t) { return static_cast<double>(theta(static_cast<long double>(t))); }

namespace {

ThetaSplit split_quad(__float128 v) {
  const double hi = static_cast<double>(v);
  return {hi, static_cast<double>(v - static_cast<__float128>(hi))};
}

ThetaSplit theta_quad(__float128 tq) {
  // Main term in quad precision: at t = 5e6 theta is ~3e7 and long double alone
  // leaves ~3e-12 of rounding noise in it.
  static const __float128 pi_q = strtoflt128("3.14159265358979323846264338327950288", nullptr);
  __float128 v = tq / 2 * logq(tq / (2 * pi_q)) - tq / 2 - pi_q / 8;
  const auto& coef = theta_coefficients();
  const long double inv = 1.0L / static_cast<long double>(tq);
  const long double inv2 = inv * inv;
  long double power = inv;
  long double tail = 0.0L;
  for (int k = 1; k <= ThetaCoefficients::kTerms; ++k) {
    const long double term = coef.c[k] * power;
    tail += term;
    if (term < 1e-30L) break;
    power *= inv2;
  }
  return split_quad(v + static_cast<__float128>(tail));
}

}  // namespace

ThetaSplit exact_sum(long double base, double offset) {
  return split_quad(static_cast<__float128>(base) + static_cast<__float128>(offset));
}

ThetaSplit theta_split(long double base, double offset) {
  const __float128 tq = static_cast<__float128>(base) + static_cast<__float128>(offset);
  if (!(tq >= 10)) {
    const long double v = theta(static_cast<long double>(tq));
    return split_quad(static_cast<__float128>(v));
  }
  return theta_quad(tq);
}

ThetaSplit theta_split(long double t) { return theta_split(t, 0.0); }

ThetaSplit theta_turns(long double base, double offset) {
  static const __float128 two_pi_q = 2 * strtoflt128("3.14159265358979323846264338327950288", nullptr);
  const ThetaSplit th = theta_split(base, offset);
  __float128 v = (static_cast<__float128>(th.hi) + static_cast<__float128>(th.lo)) / two_pi_q;
  v -= roundq(v);
  return split_quad(v);
}

double theta_derivative(double t) {
  if (!(t > 0.0)) throw DomainError("theta_derivative requires t > 0");
  if (t < 10.0) {
    // Central difference on the log-gamma definition; only used to seed Newton.
    const double h = 1e-5;
    return (theta(t + h) - theta(t - h)) / (2 * h);
  }
  // 1/2 log(t/2pi) - 1/(48 t^2) - 7/(1920 t^4) - ...
  return 0.5 * std::log(t / kTwoPi) - 1.0 / (48.0 * t * t) - 7.0 / (1920.0 * t * t * t * t);
}

std::complex<double> expint_e1(std::complex<double> z) {
  if (z == 0.0) throw DomainError("E1 has a logarithmic singularity at 0");
  if (z.real() < 0.0) throw DomainError("E1 implemented for Re z >= 0 only");
  if (std::abs(z) <= 4.0) return e1_series(z);
  return e1_continued_fraction(z);
}

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("E1(x) requires x > 0");
  return expint_e1(std::complex<double>(x, 0.0)).real();
}

double cosine_integral(double x) {
  if (!(x > 0.0)) throw DomainError("Ci(x) requires x > 0");
  if (x <= 4.0) {
    const double x2 = x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n < 100; ++n) {
      term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
      const double add = term / (2.0 * n);
      sum += add;
      if (std::fabs(add) < 1e-18) break;
    }
    return kEulerGamma + std::log(x) + sum;
  }
  return -e1_continued_fraction({0.0, x}).real();
}

double sine_integral(double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -sine_integral(-x);
  if (x <= 4.0) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 100; ++n) {
      term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::fabs(add) < 1e-18) break;
    }
    return sum;
  }
  return 0.5 * kPi + e1_continued_fraction({0.0, x}).imag();
}

void SmoothingKernel::validate() const {
  if (!(X >= 2.0) || !std::isfinite(X)) throw DomainError("smoothing kernel requires X >= 2");
  if (nodes != 64) throw DomainError("smoothing kernel supports 64 quadrature nodes");
}

double SmoothingKernel::support_lo() const { return std::exp(1.0 - 1.0 / X); }
double SmoothingKernel::support_hi() const { return std::exp(1.0); }

double bump_g(double y) { return g_unnormalized(y) / bump_normalization(); }

double kernel_u(double x, const SmoothingKernel& cfg) {
  cfg.validate();
  if (!(x > 0.0)) throw DomainError("kernel_u requires x > 0");
  return cfg.X * bump_g(cfg.X * (std::log(x) - 1.0) + 1.0) / x;
}

double kernel_v(double t, const SmoothingKernel& cfg) {
  cfg.validate();
  if (!(t > 0.0)) throw DomainError("kernel_v requires t > 0");
  // v(t) = int_{y(t)}^1 g(y) dy with y(t) = X log(t/e) + 1.
  const double y = cfg.X * (std::log(t) - 1.0) + 1.0;
  if (y <= 0.0) return 1.0;
  if (y >= 1.0) return 0.0;
  // g is symmetric about 1/2; integrating only over the short side keeps the
  // small mass relatively accurate and the result monotone under rounding.
  const auto mass_below = [](double z) { return boost::math::quadrature::gauss<double, 64>::integrate(bump_g, 0.0, z); };
  const double v = y <= 0.5 ? 1.0 - mass_below(y) : mass_below(1.0 - y);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace zm::specfun
