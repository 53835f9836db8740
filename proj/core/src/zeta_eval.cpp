#include "zetamoments/zeta_eval.hpp"

#include <algorithm>
#include <cstdint>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <quadmath.h>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "zetamoments/error.hpp"
#include "zetamoments/specfun.hpp"
#include "zetamoments/summation.hpp"

namespace zm::zeta {

namespace {

constexpr long double kTwoPiL = 2.0L * specfun::kPiL;
constexpr double kTwoPi = 2.0 * specfun::kPi;
constexpr double kEpsD = std::numeric_limits<double>::epsilon();
constexpr double kEpsLD = static_cast<double>(std::numeric_limits<long double>::epsilon());

// Gabcke's constants for |R_K(t)| <= d_K t^{-(2K+3)/4}, t >= 200.
constexpr std::array<double, 5> kGabcke = {0.127, 0.053, 0.011, 0.031, 0.017};

constexpr long double kInvTwoPiL = 1.0L / kTwoPiL;

// Reduces to roughly [-pi, pi]; exactness of the range does not matter since
// only cos/sin follow. A plain integer conversion is much cheaper than nearbyint.
long double reduce_phase(long double phase) {
  const long double q = phase * kInvTwoPiL;
  const auto k = static_cast<long long>(q + (q >= 0 ? 0.5L : -0.5L));
  return phase - kTwoPiL * static_cast<long double>(k);
}

struct BernoulliTable {
  static constexpr int kMax = 60;
  std::array<double, kMax + 2> b2n_over_fact{};  // B_{2j} / (2j)!
  BernoulliTable() {
    for (int j = 1; j <= kMax + 1; ++j) {
      b2n_over_fact[j] = boost::math::bernoulli_b2n<double>(j) / boost::math::factorial<double>(2 * j);
    }
  }
};

const BernoulliTable& bernoulli_table() {
  static const BernoulliTable table;
  return table;
}

__float128 log_turns_quad(double n) {
  static const __float128 two_pi_q = 2 * strtoflt128("3.14159265358979323846264338327950288", nullptr);
  return logq(static_cast<__float128>(n)) / two_pi_q;
}

// Precomputed log n / 2 pi and n^{-1/2} for the Riemann-Siegel main sum, and
// the Taylor series of C_0..C_4 in x = p - 1/2.
struct RsTables {
  static constexpr std::size_t kSumTable = 1u << 16;
  static constexpr int kSeries = 72;

  std::vector<double> log_hi;  // log n / 2 pi = log_hi + log_lo
  std::vector<double> log_lo;
  std::vector<double> rsqrt_n;
  std::array<std::array<double, kSeries>, 5> c_series{};

  RsTables() : log_hi(kSumTable + 1), log_lo(kSumTable + 1), rsqrt_n(kSumTable + 1) {
    // log(n) / 2 pi to quad precision: logq for primes, sums for composites.
    std::vector<__float128> turns(kSumTable + 1, 0);
    std::vector<std::uint32_t> spf(kSumTable + 1, 0);
    for (std::size_t n = 2; n <= kSumTable; ++n) {
      if (spf[n] == 0) {
        for (std::size_t m = n; m <= kSumTable; m += n) {
          if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(n);
        }
        turns[n] = log_turns_quad(static_cast<double>(n));
      } else {
        turns[n] = turns[spf[n]] + turns[n / spf[n]];
      }
    }
    for (std::size_t n = 1; n <= kSumTable; ++n) {
      log_hi[n] = static_cast<double>(turns[n]);
      log_lo[n] = static_cast<double>(turns[n] - static_cast<__float128>(log_hi[n]));
      rsqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    build_series();
  }

  static std::complex<double> psi(std::complex<double> p) {
    return std::cos(kTwoPi * (p * p - p - 0.0625)) / std::cos(kTwoPi * p);
  }

  void build_series() {
    // Taylor coefficients of Psi(1/2 + x) by the Cauchy integral on |x| = 1.
    constexpr int kSamples = 256;
    constexpr int kCoef = kSeries + 16;
    std::array<std::complex<double>, kSamples> values;
    for (int j = 0; j < kSamples; ++j) {
      const std::complex<double> w = std::polar(1.0, kTwoPi * j / kSamples);
      values[j] = psi(0.5 + w);
    }
    std::array<double, kCoef> c{};
    for (int n = 0; n < kCoef; ++n) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < kSamples; ++j) {
        acc += values[j] * std::polar(1.0, -kTwoPi * static_cast<double>(j) * n / kSamples);
      }
      c[n] = acc.real() / kSamples;
    }
    // Coefficient n of the d-th derivative series.
    auto deriv = [&](int d, int n) {
      if (n + d >= kCoef) return 0.0;
      double f = c[n + d];
      for (int i = 1; i <= d; ++i) f *= static_cast<double>(n + i);
      return f;
    };
    const double pi2 = specfun::kPi * specfun::kPi;
    const double pi4 = pi2 * pi2;
    const double pi6 = pi4 * pi2;
    const double pi8 = pi4 * pi4;
    for (int n = 0; n < kSeries; ++n) {
      c_series[0][n] = deriv(0, n);
      c_series[1][n] = -deriv(3, n) / (96.0 * pi2);
      c_series[2][n] = deriv(2, n) / (64.0 * pi2) + deriv(6, n) / (18432.0 * pi4);
      c_series[3][n] = -deriv(1, n) / (64.0 * pi2) - deriv(5, n) / (3840.0 * pi4) -
                       deriv(9, n) / (5308416.0 * pi6);
      c_series[4][n] = deriv(0, n) / (128.0 * pi2) + 19.0 * deriv(4, n) / (24576.0 * pi4) +
                       11.0 * deriv(8, n) / (5898240.0 * pi6) + deriv(12, n) / (2038431744.0 * pi8);
    }
  }
};

const RsTables& rs_tables() {
  static const RsTables tables;
  return tables;
}

// Phases are carried in turns (units of 2 pi): t log n / 2 pi splits into an
// exact Dekker product plus small cross terms, and the integer part drops out
// exactly while the product stays below 2^52.
constexpr double kFastTurnLimit = 4503599627370496.0;  // 2^52

struct DoubleDouble {
  double hi;
  double lo;
};

// Dekker's exact product error a*b - p; portable without hardware fma.
inline double two_product_error(double a, double b, double p) {
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  const double ca = kSplit * a;
  const double ah = ca - (ca - a);
  const double al = a - ah;
  const double cb = kSplit * b;
  const double bh = cb - (cb - b);
  const double bl = b - bh;
  return ((ah * bh - p) + ah * bl + al * bh) + al * bl;
}

inline double frac_part(double x) { return x - static_cast<double>(static_cast<long long>(x)); }

// 2 pi frac(theta/2pi - t L) for L = log(n)/2pi, in [-pi, pi].
inline double rs_phase(const DoubleDouble& th_turns, const DoubleDouble& t, double lhi, double llo) {
  const double p = t.hi * lhi;
  const double pe = two_product_error(t.hi, lhi, p);
  double r = th_turns.hi - frac_part(p);
  r += th_turns.lo - pe - (t.hi * llo + t.lo * lhi);
  r -= static_cast<double>(static_cast<long long>(r + (r >= 0 ? 0.5 : -0.5)));
  return kTwoPi * r;
}

}  // namespace

std::string_view to_string(EvalMethod m) noexcept {
  switch (m) {
    case EvalMethod::euler_maclaurin: return "euler_maclaurin";
    case EvalMethod::riemann_siegel: return "riemann_siegel";
    case EvalMethod::hp_model: return "hp_model";
    case EvalMethod::ehp_model: return "ehp_model";
  }
  return "unknown";
}

long euler_maclaurin_terms_for(long double t) {
  // N >= |t|/pi keeps |s + 2j| / (2 pi N) near 1/2 for the default 20 corrections.
  return static_cast<long>(std::ceil(std::fabs(t) / specfun::kPiL)) + 40;
}

ZetaValue zeta_euler_maclaurin(double sigma, long double t, long terms, int bernoulli_order) {
  if (sigma == 1.0 && t == 0.0L) throw DomainError("zeta has a pole at s = 1");
  if (bernoulli_order < 1 || bernoulli_order > BernoulliTable::kMax) {
    throw DomainError("bernoulli_order must lie in 1..60");
  }
  if (terms < 1 || static_cast<long double>(terms) < std::fabs(t) / kTwoPiL + 10.0L) {
    throw DomainError("Euler-Maclaurin needs at least |Im s|/(2 pi) + 10 terms");
  }
  const std::complex<double> s(sigma, static_cast<double>(t));
  const long N = terms;

  ComplexCompensatedSum sum;
  double magnitude = 0.0;
  for (long n = 1; n < N; ++n) {
    const long double ln = std::log(static_cast<long double>(n));
    const double phase = static_cast<double>(reduce_phase(t * ln));
    const double mod = std::exp(-sigma * static_cast<double>(ln));
    sum.add({mod * std::cos(phase), -mod * std::sin(phase)});
    magnitude += mod;
  }

  const long double lnN = std::log(static_cast<long double>(N));
  const double phaseN = static_cast<double>(reduce_phase(t * lnN));
  const std::complex<double> n_pow_minus_s =
      std::exp(-sigma * static_cast<double>(lnN)) * std::complex<double>(std::cos(phaseN), -std::sin(phaseN));
  const double Nd = static_cast<double>(N);
  sum.add(n_pow_minus_s * Nd / (s - 1.0));
  sum.add(0.5 * n_pow_minus_s);

  const auto& bern = bernoulli_table();
  std::complex<double> poch = s;             // s (s+1) ... (s+2j-2)
  std::complex<double> power = n_pow_minus_s / Nd;  // N^{-s-2j+1}
  for (int j = 1; j <= bernoulli_order; ++j) {
    sum.add(bern.b2n_over_fact[j] * poch * power);
    poch *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
    power /= Nd * Nd;
  }
  // |R_M| <= |s(s+1)...(s+2M+1)| |B_{2M+2}|/(2M+2)! N^{-sigma-2M-1}/(sigma+2M+1).
  const int M = bernoulli_order;
  const double tail = std::abs(poch * (s + (2.0 * M + 1.0))) * std::fabs(bern.b2n_over_fact[M + 1]) *
                      std::pow(Nd, -sigma - 2.0 * M - 1.0) / (sigma + 2.0 * M + 1.0);
  const double rounding = magnitude * (kEpsLD * std::fabs(static_cast<double>(t * lnN)) + 4.0 * kEpsD);

  return {sum.value(), {tail + rounding, EvalMethod::euler_maclaurin}};
}

ZetaValue zeta_euler_maclaurin(std::complex<double> s, long terms, int bernoulli_order) {
  return zeta_euler_maclaurin(s.real(), static_cast<long double>(s.imag()), terms, bernoulli_order);
}

ZValue hardy_z_euler_maclaurin(long double t) {
  const ZetaValue z = zeta_euler_maclaurin(0.5, t, euler_maclaurin_terms_for(t), 20);
  const double th = static_cast<double>(reduce_phase(specfun::theta(t)));
  const std::complex<double> rotated = std::polar(1.0, th) * z.value;
  return {rotated.real(), {z.quality.abs_error_bound + std::fabs(rotated.imag()), EvalMethod::euler_maclaurin}};
}

double rs_coefficient(int k, double p) {
  if (k < 0 || k > 4) throw DomainError("Riemann-Siegel coefficient index must lie in 0..4");
  const auto& series = rs_tables().c_series[k];
  const double x = p - 0.5;
  double acc = 0.0;
  for (int n = RsTables::kSeries; n-- > 0;) acc = acc * x + series[n];
  return acc;
}

ZValue riemann_siegel_z(long double base, double offset, int correction_terms) {
  const long double t = base + static_cast<long double>(offset);
  if (!(t >= 30.0L)) throw DomainError("Riemann-Siegel evaluation requires t >= 30");
  if (correction_terms < 0 || correction_terms > 4) throw DomainError("correction_terms must lie in 0..4");
  const auto& tab = rs_tables();

  const long double a = std::sqrt(t / kTwoPiL);
  const long N = static_cast<long>(std::floor(a));
  const double p = static_cast<double>(a - static_cast<long double>(N));
  const specfun::ThetaSplit ths = specfun::theta_turns(base, offset);
  const long double th = (static_cast<long double>(ths.hi) + static_cast<long double>(ths.lo)) * kTwoPiL;

  // base + offset is carried unrounded: rounding it to long double would move
  // the abscissa by up to 2^-64 t, which steep integrands notice.
  const specfun::ThetaSplit tsplit = specfun::exact_sum(base, offset);
  const DoubleDouble th2{ths.hi, ths.lo};
  const DoubleDouble t2{tsplit.hi, tsplit.lo};
  CompensatedSum<double> sum;
  double magnitude = 0.0;
  const long table_n = std::min<long>(N, static_cast<long>(RsTables::kSumTable));
  const bool fast = t * std::log(static_cast<long double>(N)) * kInvTwoPiL < kFastTurnLimit;
  if (!fast) {
    const long double th_full = specfun::theta(t);
    for (long n = 1; n <= N; ++n) {
      const long double ln = std::log(static_cast<long double>(n));
      const double w = 1.0 / std::sqrt(static_cast<double>(n));
      sum.add(w * std::cos(static_cast<double>(reduce_phase(th_full - t * ln))));
      magnitude += w;
    }
  }
  for (long n = 1; fast && n <= table_n; ++n) {
    const double w = tab.rsqrt_n[n];
    sum.add(w * std::cos(rs_phase(th2, t2, tab.log_hi[n], tab.log_lo[n])));
    magnitude += w;
  }
  for (long n = table_n + 1; fast && n <= N; ++n) {
    const __float128 lq = log_turns_quad(static_cast<double>(n));
    const specfun::ThetaSplit ln{static_cast<double>(lq), static_cast<double>(lq - static_cast<__float128>(static_cast<double>(lq)))};
    const double w = 1.0 / std::sqrt(static_cast<double>(n));
    sum.add(w * std::cos(rs_phase(th2, t2, ln.hi, ln.lo)));
    magnitude += w;
  }

  const double ad = static_cast<double>(a);
  double correction = 0.0;
  double a_pow = 1.0;
  for (int k = 0; k <= correction_terms; ++k) {
    correction += rs_coefficient(k, p) * a_pow;
    a_pow /= ad;
  }
  const double sign = (N - 1) % 2 == 0 ? 1.0 : -1.0;
  const double value = 2.0 * sum.value() + sign * correction / std::sqrt(ad);

  const double td = static_cast<double>(t);
  double truncation = kGabcke[correction_terms] * std::pow(td, -(2.0 * correction_terms + 3.0) / 4.0);
  if (td < 200.0) truncation *= 4.0;
  // The fast path keeps each phase to a few ulps of 2 pi; the long double path loses eps_ld of the unreduced phase.
  const double phase_error =
      fast ? 8.0 * kEpsD
           : kEpsLD * std::fabs(static_cast<double>(t * std::log(a)) + 2.0 * static_cast<double>(th)) + 4.0 * kEpsD;
  return {value, {truncation + 2.0 * magnitude * phase_error, EvalMethod::riemann_siegel}};
}

ZValue riemann_siegel_z(long double t, int correction_terms) { return riemann_siegel_z(t, 0.0, correction_terms); }

ZValue riemann_siegel_z(const HeightValue& t, int correction_terms) {
  return riemann_siegel_z(t.base_value(), t.offset(), correction_terms);
}

ZValue hardy_z(long double t) {
  if (t < 30.0L) return hardy_z_euler_maclaurin(t);
  return riemann_siegel_z(t, 2);
}

AbsZeta abs_zeta_line(long double base, double offset, double quality_target) {
  if (!(quality_target > 0.0)) throw DomainError("quality_target must be positive");
  const long double t = base + static_cast<long double>(offset);
  if (t < 30.0L) {
    const ZetaValue z = zeta_euler_maclaurin(0.5, t, euler_maclaurin_terms_for(t), 20);
    return {std::abs(z.value), z.quality, z.quality.abs_error_bound <= quality_target};
  }
  ZValue z;
  for (int k = 2; k <= 4; ++k) {
    z = riemann_siegel_z(base, offset, k);
    if (z.quality.abs_error_bound <= quality_target) break;
  }
  if (z.quality.abs_error_bound > quality_target && t < kEulerMaclaurinFallback) {
    const ZetaValue e = zeta_euler_maclaurin(0.5, t, euler_maclaurin_terms_for(t), 20);
    if (e.quality.abs_error_bound < z.quality.abs_error_bound) {
      return {std::abs(e.value), e.quality, e.quality.abs_error_bound <= quality_target};
    }
  }
  return {std::fabs(z.value), z.quality, z.quality.abs_error_bound <= quality_target};
}

AbsZeta abs_zeta_line(long double t, double quality_target) { return abs_zeta_line(t, 0.0, quality_target); }

AbsZeta abs_zeta_line(const HeightValue& t, double quality_target) {
  return abs_zeta_line(t.base_value(), t.offset(), quality_target);
}

}  // namespace zm::zeta
