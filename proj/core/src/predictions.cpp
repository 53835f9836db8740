#include "zetamoments/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "zetamoments/error.hpp"
#include "zetamoments/io.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/specfun.hpp"
#include "zetamoments/summation.hpp"

namespace zm::predict {

namespace {

constexpr long double kTwoPiL = 2.0L * specfun::kPiL;

// Published fourth moment polynomial in mean form, (1/T) int_0^T |zeta|^4.
constexpr double kP2MeanForm[] = {-0.040924, 1.35334, 0.937279, 0.496227, 0.050660};

void check_k(int k, int hi) {
  if (k < 1 || k > hi) throw DomainError("k must lie in 1.." + std::to_string(hi));
}

long double horner(const std::vector<double>& c, long double x) {
  long double acc = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + static_cast<long double>(*it);
  return acc;
}

// F - 1 for the local factor F = sum_{m>=0} binom(m+k-1, m)^2 p^{-m}; returning
// the excess keeps log1p accurate for large p.
long double local_factor_minus_one(int k, double p, double tol) {
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int m = 0; m < 100000; ++m) {
    const long double ratio = static_cast<long double>(m + k) / (m + 1);
    term *= ratio * ratio / p;
    sum += term;
    if (ratio * ratio < p && term < tol * (1.0L + sum)) return sum;
  }
  throw ConvergenceError("local Euler factor did not converge");
}

double compute_log_a(int k, const ArithFactorConfig& cfg) {
  if (!(cfg.series_tolerance > 0.0)) throw DomainError("series_tolerance must be positive");
  std::uint32_t cutoff = cfg.prime_cutoff;
  if (cutoff == 0) cutoff = std::max<std::uint32_t>(1000000u, 100u * static_cast<std::uint32_t>(k * k));
  if (cutoff < 2) throw DomainError("prime cutoff must be at least 2");
  if (k == 1) return 0.0;

  const long double k2 = static_cast<long double>(k) * k;
  CompensatedSum<long double> sum;
  for (std::uint32_t p : primes_up_to(cutoff)) {
    const double pd = static_cast<double>(p);
    sum.add(k2 * std::log1p(-1.0L / pd) + std::log1p(local_factor_minus_one(k, pd, cfg.series_tolerance)));
  }
  // log of the local factor is -k^2(k-1)^2/(4 p^2) + O(p^{-3}).
  const double ck = -static_cast<double>(k2) * (k - 1) * (k - 1) / 4.0;
  if (cfg.tail_correction) sum.add(ck * specfun::expint_e1(std::log(static_cast<double>(cutoff))));
  return static_cast<double>(sum.value());
}

}  // namespace

double log_arithmetic_factor_a(int k, const ArithFactorConfig& cfg) {
  check_k(k, 16);
  const bool cacheable = cfg.prime_cutoff == 0 && cfg.series_tolerance == ArithFactorConfig{}.series_tolerance &&
                         cfg.tail_correction;
  if (!cacheable) return compute_log_a(k, cfg);
  // The default configuration is asked for repeatedly by accuracy standards.
  static std::mutex mutex;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  const double v = compute_log_a(k, cfg);
  std::lock_guard lock(mutex);
  cache.emplace(k, v);
  return v;
}

double arithmetic_factor_a(int k, const ArithFactorConfig& cfg) { return std::exp(log_arithmetic_factor_a(k, cfg)); }

double log_rmt_factor_g_over_fact(int k) {
  check_k(k, 64);
  long double acc = 0.0L;
  for (int j = 0; j < k; ++j) acc += std::lgamma(static_cast<long double>(j + 1)) - std::lgamma(static_cast<long double>(j + k + 1));
  return static_cast<double>(acc);
}

double rmt_factor_g_over_fact(int k) { return std::exp(log_rmt_factor_g_over_fact(k)); }

double leading_coefficient(int k) {
  return std::exp(log_arithmetic_factor_a(k) + log_rmt_factor_g_over_fact(k));
}

double log_cue_moment(std::uint64_t N, int k) {
  check_k(k, 64);
  const long double n = static_cast<long double>(N);
  long double acc = 0.0L;
  for (int i = 1; i <= k; ++i) {
    for (int l = 0; l < k; ++l) acc += std::log((n + i + l) / static_cast<long double>(i + l));
  }
  return static_cast<double>(acc);
}

double cue_moment(std::uint64_t N, int k) {
  check_k(k, 64);
  const long double n = static_cast<long double>(N);
  // Exact while the running product stays small; log domain otherwise.
  if (k <= 8 && n < 1e6L) {
    long double num = 1.0L;
    long double den = 1.0L;
    for (int i = 1; i <= k; ++i) {
      for (int l = 0; l < k; ++l) {
        num *= n + i + l;
        den *= i + l;
      }
    }
    if (std::isfinite(num)) return static_cast<double>(num / den);
  }
  return std::exp(log_cue_moment(N, k));
}

std::vector<double> cue_polynomial(int k) {
  check_k(k, 8);
  std::vector<long double> poly{1.0L};
  long double den = 1.0L;
  for (int i = 1; i <= k; ++i) {
    for (int l = 0; l < k; ++l) {
      std::vector<long double> next(poly.size() + 1, 0.0L);
      for (std::size_t d = 0; d < poly.size(); ++d) {
        next[d] += poly[d] * (i + l);
        next[d + 1] += poly[d];
      }
      poly = std::move(next);
      den *= i + l;
    }
  }
  std::vector<double> out(poly.size());
  for (std::size_t d = 0; d < poly.size(); ++d) out[d] = static_cast<double>(poly[d] / den);
  return out;
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::published: return "published";
    case Provenance::ingested: return "ingested";
    case Provenance::rmt: return "rmt";
    case Provenance::leading_only: return "leading_only";
  }
  return "unknown";
}

double PredictionPolynomial::operator()(double x) const { return static_cast<double>(horner(coefficients, x)); }

std::vector<double> PredictionPolynomial::mean_form() const {
  // Q = P - P' + P'' - ...
  std::vector<double> q(coefficients.size(), 0.0);
  std::vector<long double> deriv(coefficients.begin(), coefficients.end());
  long double sign = 1.0L;
  std::vector<long double> acc(coefficients.size(), 0.0L);
  while (!deriv.empty()) {
    for (std::size_t i = 0; i < deriv.size(); ++i) acc[i] += sign * deriv[i];
    std::vector<long double> d(deriv.size() > 0 ? deriv.size() - 1 : 0);
    for (std::size_t i = 1; i < deriv.size(); ++i) d[i - 1] = deriv[i] * static_cast<long double>(i);
    deriv = std::move(d);
    sign = -sign;
  }
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<double>(acc[i]);
  return q;
}

PredictionPolynomial PredictionPolynomial::leading_term() const {
  PredictionPolynomial out;
  out.k = k;
  out.coefficients.assign(coefficients.size(), 0.0);
  out.coefficients.back() = leading_coefficient(k);
  out.provenance = Provenance::leading_only;
  return out;
}

std::vector<double> integrand_from_mean_form(const std::vector<double>& q) {
  std::vector<double> p(q);
  for (std::size_t i = 1; i < q.size(); ++i) p[i - 1] += q[i] * static_cast<double>(i);
  return p;
}

CoefficientTable parse_coefficient_file(const std::string& text) {
  std::vector<std::string> lines = io::split(text, '\n');
  std::size_t i = 0;
  auto skip = [&] {
    while (i < lines.size() && (io::trim(lines[i]).empty() || io::trim(lines[i])[0] == '#')) ++i;
  };
  skip();
  if (i >= lines.size() || io::trim(lines[i]) != "ZETAPK v1") throw FormatError("not a ZETAPK v1 file");
  ++i;
  CoefficientTable table;
  for (; i < lines.size(); ++i) {
    const std::string line = io::trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto semi = line.find(';');
    if (line.rfind("k=", 0) != 0 || semi == std::string::npos) throw FormatError("bad coefficient line '" + line + "'");
    const long long k = io::parse_integer(line.substr(2, semi - 2));
    if (k < 1 || k > 16) throw FormatError("coefficient file k out of range");
    std::vector<double> c;
    for (const auto& f : io::split(line.substr(semi + 1), ',')) c.push_back(io::parse_double(f));
    if (static_cast<long long>(c.size()) != k * k + 1) {
      throw FormatError("k=" + std::to_string(k) + " needs " + std::to_string(k * k + 1) + " coefficients");
    }
    if (!table.emplace(static_cast<int>(k), std::move(c)).second) throw FormatError("duplicate k in coefficient file");
  }
  return table;
}

CoefficientTable read_coefficient_file(const std::filesystem::path& path) {
  return parse_coefficient_file(io::read_text(path));
}

std::string render_coefficient_file(const CoefficientTable& table) {
  std::string out = "ZETAPK v1\n";
  for (const auto& [k, c] : table) {
    out += "k=" + std::to_string(k) + ";";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : " ") + io::format_double(c[i], 17);
    out += "\n";
  }
  return out;
}

PredictionPolynomial polynomial_P(int k, const CoefficientTable* table) {
  check_k(k, 16);
  PredictionPolynomial poly;
  poly.k = k;
  if (k == 1) {
    poly.coefficients = {2.0 * specfun::kEulerGamma, 1.0};
    poly.provenance = Provenance::exact;
    return poly;
  }
  if (k == 2) {
    poly.coefficients = integrand_from_mean_form({std::begin(kP2MeanForm), std::end(kP2MeanForm)});
    poly.provenance = Provenance::published;
    return poly;
  }
  if (table == nullptr || table->find(k) == table->end()) {
    throw CoefficientsUnavailable("coefficients of P_" + std::to_string(k) + " unavailable; supply a ZETAPK file");
  }
  poly.coefficients = table->at(k);
  poly.provenance = Provenance::ingested;
  const double expect = leading_coefficient(k);
  const double rel = std::fabs(poly.leading() - expect) / expect;
  if (!(rel < kLeadingTolerance)) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "P_%d leading coefficient %.10g disagrees with a(k)g(k)/k^2! = %.10g", k,
                  poly.leading(), expect);
    throw FormatError(msg);
  }
  return poly;
}

PredictionPolynomial rmt_polynomial_4() {
  PredictionPolynomial poly;
  poly.k = 2;
  poly.coefficients = cue_polynomial(2);
  const double a2 = arithmetic_factor_a(2);
  for (double& c : poly.coefficients) c *= a2;
  poly.provenance = Provenance::rmt;
  return poly;
}

double leading_term_moment(const HeightValue& T, int k) {
  check_k(k, 16);
  const long double logT = std::log(T.value());
  return std::exp(log_arithmetic_factor_a(k) + log_rmt_factor_g_over_fact(k) +
                  static_cast<double>(static_cast<long double>(k) * k * std::log(logT)));
}

namespace {

// Mean of P(log(t/2pi)) over [a, a + H] written as Q(L_b) + (a/H)(Q(L_b) - Q(L_a))
// with L_b - L_a = log1p(H/a), so nothing cancels when H << a.
long double mean_value(long double a, long double H, const PredictionPolynomial& poly) {
  if (!(H > 0.0L)) throw DomainError("prediction range must have positive length");
  if (!(a > 0.0L)) throw DomainError("prediction range must start above 0");
  const std::vector<double> q = poly.mean_form();
  const long double La = std::log(a / kTwoPiL);
  const long double delta = std::log1p(H / a);
  const long double Lb = La + delta;
  long double diff = 0.0L;
  for (std::size_t j = 1; j < q.size(); ++j) {
    long double s = 0.0L;
    long double pb = 1.0L;
    for (std::size_t i = 0; i < j; ++i) {
      s += pb * std::pow(La, static_cast<long double>(j - 1 - i));
      pb *= Lb;
    }
    diff += static_cast<long double>(q[j]) * delta * s;
  }
  return horner(q, Lb) + (a / H) * diff;
}

}  // namespace

double prediction_mean(const HeightValue& lo, const HeightValue& hi, const PredictionPolynomial& poly,
                       bool leading_only) {
  const long double H = hi - lo;
  return static_cast<double>(mean_value(lo.value(), H, leading_only ? poly.leading_term() : poly));
}

double prediction_integral(const HeightValue& lo, const HeightValue& hi, const PredictionPolynomial& poly,
                           bool leading_only) {
  const long double H = hi - lo;
  return static_cast<double>(H * mean_value(lo.value(), H, leading_only ? poly.leading_term() : poly));
}

double prediction_integral(long double lo, long double hi, const PredictionPolynomial& poly, bool leading_only) {
  const long double H = hi - lo;
  return static_cast<double>(H * mean_value(lo, H, leading_only ? poly.leading_term() : poly));
}

double short_interval_second_moment(const HeightValue& T, double H) {
  if (!(H > 0.0)) throw DomainError("H must be positive");
  const long double t = T.value();
  const long double h = H;
  // ((T+H) L_b - T L_a)/H = L_b + (T/H) log1p(H/T)
  const long double Lb = std::log((t + h) / kTwoPiL);
  return static_cast<double>(Lb + (t / h) * std::log1p(h / t) + 2.0L * specfun::kEulerGamma - 1.0L);
}

}  // namespace zm::predict
