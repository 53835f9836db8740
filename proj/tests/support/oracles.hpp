#pragma once

// Independent high-precision references used by the tests. Nothing here
// calls into the library; each value is computed from a textbook series in
// Boost.Multiprecision so it can be compared against the double-precision
// implementations.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace zm::oracle {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

/// Euler's constant from H_n - log n and its Euler-Maclaurin tail, n = 1000.
Real50 euler_gamma();

/// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, via Stirling with
/// Bernoulli terms after shifting the argument to |z| > 40.
Real50 theta(const Real50& t);

/// Root of theta(t) = n pi by bisection on the oracle theta.
Real50 gram_point(long n);

/// E1(z) = -gamma - log z - sum_k (-z)^k / (k k!) in 100-digit arithmetic.
std::complex<double> expint_e1(std::complex<double> z);
/// Ci(x) = gamma + log x + sum_k (-1)^k x^{2k} / (2k (2k)!).
double cosine_integral(double x);

/// zeta(1/2) from the alternating eta series with Cohen-Villegas-Zagier
/// acceleration.
Real50 zeta_half();

/// a(k) from the closed local factor (1 - 1/p)^{(k-1)^2} sum_j C(k-1, j)^2 p^{-j}
/// over primes up to `limit`, plus -k^2 (k-1)^2 / 4 * 1/(P log P) for the rest.
long double arithmetic_factor(int k, std::uint32_t limit);

/// Exact CUE moment by the factorial product over j < N in 50 digits.
Real50 cue_moment(std::uint64_t N, int k);

struct QuadratureReference {
  double value = 0.0;
  double error = 0.0;
};
/// Adaptive 61-point Gauss-Kronrod.
QuadratureReference integrate(const std::function<double(double)>& f, double a, double b);

}  // namespace zm::oracle
