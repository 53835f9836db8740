#pragma once

#include <complex>

namespace zm::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Euler's constant.
double euler_gamma() noexcept;

/// Riemann-Siegel theta, arg Gamma(1/4 + it/2) - (t/2) log pi.
///
/// For t >= 10 the Stirling expansion
///   t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760t^3) + ...
/// is summed in long double until terms drop below 1e-18; below 10 the complex
/// log-gamma definition is used. Throws DomainError for t <= 0.
long double theta(long double t);
double theta(double t);

/// theta(t) = hi + lo with the leading terms summed in quad precision, so
/// the split carries ~1e-30 relative accuracy for t >= 10 (long double
/// theta() is limited to ~1e-19 relative).
struct ThetaSplit {
  double hi = 0.0;
  double lo = 0.0;
};
ThetaSplit theta_split(long double t);
ThetaSplit theta_split(long double base, double offset);
/// theta / 2 pi reduced to [-1/2, 1/2], as hi + lo.
ThetaSplit theta_turns(long double base, double offset);
/// base + offset as hi + lo without rounding.
ThetaSplit exact_sum(long double base, double offset);

/// d theta / dt.
double theta_derivative(double t);

/// Principal branch of log Gamma(z) for Re z > 0, continuous in Im z.
std::complex<double> log_gamma(std::complex<double> z);

/// Exponential integral E1(z) = int_z^inf e^{-w}/w dw for Re z >= 0, z != 0.
/// Power series for |z| <= 4, continued fraction beyond.
std::complex<double> expint_e1(std::complex<double> z);
double expint_e1(double x);

/// Standard cosine integral Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt,
/// equal to -int_x^inf cos(t)/t dt. Throws DomainError for x <= 0.
double cosine_integral(double x);

/// Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

/// Compactly supported smoothing kernel u(x) = X g(X log(x/e) + 1) / x with
/// support [e^{1-1/X}, e], where g(y) is the normalized bump
/// f(y) f(1-y) / int_0^1 f f(1-.) and f(y) = exp(-1/y^2).
struct SmoothingKernel {
  double X = 6.0;
  int nodes = 64;  ///< Gauss-Legendre nodes used for v(t); only 64 is tabulated.

  void validate() const;
  double support_lo() const;
  double support_hi() const;
};

/// The normalized bump g on [0, 1].
double bump_g(double y);
double kernel_u(double x, const SmoothingKernel& cfg);
/// v(t) = int_t^inf u(x) dx, clamped to [0, 1].
double kernel_v(double t, const SmoothingKernel& cfg);

}  // namespace zm::specfun
