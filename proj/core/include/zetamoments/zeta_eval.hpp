#pragma once

#include <complex>
#include <string_view>

#include "zetamoments/height.hpp"

namespace zm::zeta {

enum class EvalMethod { euler_maclaurin, riemann_siegel, hp_model, ehp_model };

std::string_view to_string(EvalMethod m) noexcept;

struct EvalQuality {
  double abs_error_bound = 0.0;
  EvalMethod method = EvalMethod::riemann_siegel;
};

struct ZetaValue {
  std::complex<double> value;
  EvalQuality quality;
};

struct ZValue {
  double value = 0.0;
  EvalQuality quality;
};

/// zeta(s) by Euler-Maclaurin summation with `terms` explicit terms and
/// `bernoulli_order` Bernoulli corrections. The bound combines the first
/// omitted Bernoulli term with a floating point rounding estimate.
///
/// Throws DomainError at the pole and when terms < |Im s|/(2 pi) + 10.
ZetaValue zeta_euler_maclaurin(std::complex<double> s, long terms, int bernoulli_order);

/// Same on the line Re s = sigma with the height carried in long double, so the
/// phases t log n keep their absolute precision.
ZetaValue zeta_euler_maclaurin(double sigma, long double t, long terms, int bernoulli_order);

/// Euler-Maclaurin terms that satisfy the tail condition for height t.
long euler_maclaurin_terms_for(long double t);

/// Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it) evaluated by Euler-Maclaurin;
/// the imaginary residue of the rotation is folded into the error bound.
ZValue hardy_z_euler_maclaurin(long double t);

/// Riemann-Siegel Z(t) with remainder corrections C_0 .. C_{correction_terms}.
/// The error bound uses Gabcke's constants d_K t^{-(2K+3)/4} (heuristic below
/// t = 200) plus a rounding estimate. Throws DomainError for t < 30 or
/// correction_terms outside 0..4.
ZValue riemann_siegel_z(const HeightValue& t, int correction_terms = 2);
ZValue riemann_siegel_z(long double t, int correction_terms = 2);
/// Height base + offset taken without rounding the sum.
ZValue riemann_siegel_z(long double base, double offset, int correction_terms);

/// Riemann-Siegel remainder coefficient C_k(p), k in 0..4, p in [0, 1).
double rs_coefficient(int k, double p);

/// Hardy Z dispatcher: Euler-Maclaurin below 30, Riemann-Siegel above.
ZValue hardy_z(long double t);
inline ZValue hardy_z(const HeightValue& t) { return hardy_z(t.value()); }

struct AbsZeta {
  double value = 0.0;
  EvalQuality quality;
  bool quality_met = true;
};

/// Heights below this may fall back to Euler-Maclaurin when Riemann-Siegel
/// with four corrections misses the requested quality.
inline constexpr long double kEulerMaclaurinFallback = 1e4L;

/// |zeta(1/2 + it)| with a reported bound; quality_met is false when no
/// available method reaches `quality_target`.
AbsZeta abs_zeta_line(const HeightValue& t, double quality_target);
AbsZeta abs_zeta_line(long double t, double quality_target);
AbsZeta abs_zeta_line(long double base, double offset, double quality_target);

}  // namespace zm::zeta
