#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zetamoments/height.hpp"

namespace zm::predict {

struct ArithFactorConfig {
  std::uint32_t prime_cutoff = 0;  ///< 0 selects max(10^6, 100 k^2)
  double series_tolerance = 1e-12;
  bool tail_correction = true;  ///< add the first-order estimate for primes above the cutoff
};

/// a(k) = prod_p (1 - 1/p)^{k^2} sum_m d_k(p^m)^2 p^{-m}, 1 <= k <= 16.
/// Accumulated in the log domain; primes above the cutoff contribute
/// -k^2 (k-1)^2 / 4 * sum_{p > P} p^{-2}, approximated by E1(log P).
double arithmetic_factor_a(int k, const ArithFactorConfig& cfg = {});
double log_arithmetic_factor_a(int k, const ArithFactorConfig& cfg = {});

/// g(k)/(k^2)! = prod_{j=0}^{k-1} j!/(j+k)!.
double rmt_factor_g_over_fact(int k);
double log_rmt_factor_g_over_fact(int k);

/// a(k) g(k) / (k^2)!.
double leading_coefficient(int k);

/// CUE moment E_N|Z_N|^{2k} = prod_{j=0}^{N-1} j!(j+2k)!/((j+k)!)^2, evaluated as
/// prod_{i=1}^{k} prod_{l=0}^{k-1} (N+i+l)/(i+l).
double cue_moment(std::uint64_t N, int k);
double log_cue_moment(std::uint64_t N, int k);
/// Coefficients (ascending) of cue_moment as a polynomial in N.
std::vector<double> cue_polynomial(int k);

enum class Provenance { exact, published, ingested, rmt, leading_only };
std::string_view to_string(Provenance p) noexcept;

/// P_k(x) in ascending coefficients, x = log(t / 2 pi), normalized as the
/// integrand: int_T^{T+H} |zeta|^{2k} ~ int_T^{T+H} P_k(log(t/2pi)) dt.
struct PredictionPolynomial {
  int k = 1;
  std::vector<double> coefficients;
  Provenance provenance = Provenance::exact;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double leading() const { return coefficients.back(); }
  double operator()(double x) const;
  /// Q with Q + Q' = P, so (1/T) int_0^T P(log(t/2pi)) dt = Q(log(T/2pi)).
  std::vector<double> mean_form() const;
  /// Top coefficient only, a(k) g(k)/(k^2)! x^{k^2} in exact arithmetic.
  PredictionPolynomial leading_term() const;
};

/// Inverse of mean_form: P = Q + Q'.
std::vector<double> integrand_from_mean_form(const std::vector<double>& q);

/// Parsed `ZETAPK v1` coefficient file, keyed by k.
using CoefficientTable = std::map<int, std::vector<double>>;
CoefficientTable read_coefficient_file(const std::filesystem::path& path);
CoefficientTable parse_coefficient_file(const std::string& text);
std::string render_coefficient_file(const CoefficientTable& table);

/// Relative tolerance for the load-time leading coefficient check.
inline constexpr double kLeadingTolerance = 1e-6;

/// k = 1: exact x + 2 gamma. k = 2: built from the published mean-form
/// coefficients 0.050660, 0.496227, 0.937279, 1.35334, -0.040924.
/// k >= 3: taken from `table`; throws CoefficientsUnavailable if absent and
/// FormatError if the leading coefficient fails the check.
PredictionPolynomial polynomial_P(int k, const CoefficientTable* table = nullptr);

/// a(2) * cue_moment(N, 2) expanded in N.
PredictionPolynomial rmt_polynomial_4();

/// a(k) g(k)/(k^2)! (log T)^{k^2}.
double leading_term_moment(const HeightValue& T, int k);

/// int_{lo}^{hi} P(log(t/2pi)) dt in closed form.
double prediction_integral(const HeightValue& lo, const HeightValue& hi, const PredictionPolynomial& poly,
                           bool leading_only = false);
/// Same divided by hi - lo.
double prediction_mean(const HeightValue& lo, const HeightValue& hi, const PredictionPolynomial& poly,
                       bool leading_only = false);
double prediction_integral(long double lo, long double hi, const PredictionPolynomial& poly,
                           bool leading_only = false);

/// ((T+H) log((T+H)/2pi) - T log(T/2pi))/H + 2 gamma - 1.
double short_interval_second_moment(const HeightValue& T, double H);

}  // namespace zm::predict
