#include "zetamoments/local_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>

#include "zetamoments/error.hpp"
#include "zetamoments/parallel.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/zeta_eval.hpp"

namespace zm::local {

namespace {

constexpr double kReferenceQuality = 1e-8;

// Sum of Ci(|t - gamma_j| log X); -inf when t is one of the ordinates.
double log_zx(double t, std::size_t n, const ZeroList& zeros, int m, double X) {
  if (m == 0) return 0.0;
  const double logx = std::log(X);
  double acc = 0.0;
  for (std::size_t j = n + 1 - m; j <= n + m; ++j) {
    const double d = std::fabs(t - zeros.offsets[j]);
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    acc += specfun::cosine_integral(d * logx);
  }
  return acc;
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::hp: return "HP";
    case ModelKind::ehp: return "EHP";
    case ModelKind::ehp_normalized: return "EHP-normalized";
  }
  return "unknown";
}

void LocalModelConfig::validate() const {
  if (m < 1) throw DomainError("local model needs m >= 1");
  if (model != ModelKind::hp) {
    if (!(X >= 2.0)) throw DomainError("EHP needs X >= 2");
    kernel.validate();
  }
}

std::string LocalModelConfig::label() const {
  if (model == ModelKind::hp) return "HP";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s X=%g", to_string(model).c_str(), X);
  return buf;
}

void require_window(const ZeroList& zeros, std::size_t n, int m) {
  if (m < 0) throw DomainError("window size must be nonnegative");
  const std::size_t need_lo = static_cast<std::size_t>(std::max(m, 1)) - 1;
  if (n < need_lo || n + static_cast<std::size_t>(std::max(m, 1)) >= zeros.size()) {
    throw DomainError("interval " + std::to_string(n) + " lacks " + std::to_string(m) +
                      " neighbouring zeros on each side");
  }
}

HadamardWindow::HadamardWindow(const ZeroList& zeros, std::size_t n, int m) {
  require_window(zeros, n, m);
  lo_ = zeros.offsets[n];
  hi_ = zeros.offsets[n + 1];
  eta_ = 0.5 * (lo_ + hi_);
  if (m == 0) return;
  d_.reserve(2 * m);
  for (std::size_t j = n + 1 - m; j <= n + m; ++j) d_.push_back(zeros.offsets[j] - eta_);
  inv_d_.resize(d_.size());
  for (std::size_t j = 0; j < d_.size(); ++j) inv_d_[j] = 1.0 / d_[j];
}

double HadamardWindow::ratio_at(double x) const {
  double prod = 1.0;
  int exponent = 0;
  for (std::size_t j = 0; j < d_.size(); ++j) {
    prod *= std::fabs((d_[j] - x) * inv_d_[j]);  // exactly 0 at x = d_j
    if ((j & 31) == 31) {
      int e = 0;
      prod = std::frexp(prod, &e);
      exponent += e;
    }
  }
  return std::ldexp(prod, exponent);
}

double hp_approx(double t, std::size_t n, const ZeroList& zeros, int m, double anchor) {
  const HadamardWindow w(zeros, n, m);
  if (!(t > w.lo() && t < w.hi())) {
    if (t == w.lo() || t == w.hi()) return 0.0;
    throw DomainError("hp_approx: t outside the interval");
  }
  return anchor * w.ratio(t);
}

EulerFactor::EulerFactor(double X, specfun::SmoothingKernel kernel) {
  if (!(X >= 2.0)) throw DomainError("P_X needs X >= 2");
  kernel.X = X;
  kernel.validate();
  const double logx = std::log(X);
  for (const PrimePower& pp : prime_powers_up_to(static_cast<std::uint32_t>(std::floor(X)))) {
    const double logn = std::log(static_cast<double>(pp.n));
    // Lambda(n) / log n = 1/e for n = p^e.
    const double inv_e = pp.log_p / logn;
    const double v = specfun::kernel_v(std::exp(logn / logx), kernel);
    if (v == 0.0) continue;
    log_n_.push_back(std::log(static_cast<long double>(pp.n)));
    weight_.push_back(inv_e * v / std::sqrt(static_cast<double>(pp.n)));
  }
}

double EulerFactor::log_value(long double height) const {
  constexpr long double two_pi = 2.0L * specfun::kPiL;
  double acc = 0.0;
  for (std::size_t i = 0; i < log_n_.size(); ++i) {
    long double phase = height * log_n_[i];
    phase -= two_pi * std::floor(phase / two_pi);
    acc += weight_[i] * std::cos(static_cast<double>(phase));
  }
  return acc;
}

double EulerFactor::operator()(long double height) const { return std::exp(log_value(height)); }

double ehp_PX(long double height, double X, const specfun::SmoothingKernel& kernel) {
  return EulerFactor(X, kernel)(height);
}

double ehp_ZX(double t, std::size_t n, const ZeroList& zeros, int m, double X) {
  if (!(X >= 2.0)) throw DomainError("Z_X needs X >= 2");
  if (m > 0) require_window(zeros, n, m);
  return std::exp(log_zx(t, n, zeros, m, X));
}

double ehp_approx(double t, std::size_t n, const ZeroList& zeros, int m, double X,
                  const specfun::SmoothingKernel& kernel, bool normalized, std::optional<double> anchor) {
  if (normalized && !anchor) throw DomainError("normalized EHP needs the midpoint anchor");
  if (m > 0) require_window(zeros, n, m);
  const EulerFactor px(X, kernel);
  const long double base = zeros.base_value();
  const double lt = px.log_value(base + t) + log_zx(t, n, zeros, m, X);
  if (!normalized) return std::exp(lt);
  const double eta = 0.5 * (zeros.offsets[n] + zeros.offsets[n + 1]);
  const double le = px.log_value(base + eta) + log_zx(eta, n, zeros, m, X);
  return *anchor * std::exp(lt - le);
}

int grid_points(double gap, double mean_gap) {
  if (!(gap > 0.0) || !(mean_gap > 0.0)) throw DomainError("grid_points needs positive spacings");
  return 2 * static_cast<int>(std::floor(10.0 * gap / mean_gap + 1.0)) + 1;
}

ExperimentGrid build_grid(const ZeroList& zeros, std::size_t first, std::size_t count, unsigned workers) {
  if (first + count >= zeros.size()) throw DomainError("experiment span runs past the zero list");
  ExperimentGrid g;
  g.first = first;
  g.count = count;
  g.x.resize(count);
  g.reference.resize(count);
  g.skipped.assign(count, false);
  const long double base = zeros.base_value();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = first + i;
    const double a = zeros.offsets[n];
    const double b = zeros.offsets[n + 1];
    const double gap = b - a;
    if (zeros.gap_before(n + 1) || !(gap > 1e-9)) {
      g.skipped[i] = true;
      continue;
    }
    const int l = grid_points(gap, mean_spacing(base + a));
    const double h = gap / (l + 1);
    const int centre = (l + 1) / 2;
    g.x[i].resize(l);
    for (int d = 1; d <= l; ++d) g.x[i][d - 1] = (d - centre) * h;
    g.points += static_cast<std::size_t>(l);
  }
  parallel_for(count, workers, [&](std::size_t i) {
    if (g.skipped[i]) return;
    const std::size_t n = first + i;
    const double eta = 0.5 * (zeros.offsets[n] + zeros.offsets[n + 1]);
    const long double centre = base + static_cast<long double>(eta);
    auto& ref = g.reference[i];
    ref.resize(g.x[i].size());
    for (std::size_t d = 0; d < ref.size(); ++d) {
      ref[d] = zeta::abs_zeta_line(centre, g.x[i][d], kReferenceQuality).value;
    }
  });
  return g;
}

ExperimentResult run_experiment(const ZeroList& zeros, const ExperimentGrid& grid, const LocalModelConfig& cfg,
                                const std::string& id, unsigned workers) {
  cfg.validate();
  ExperimentResult r;
  r.experiment_id = id;
  r.config = cfg;
  r.interval_max_errors.assign(grid.count, 0.0);
  std::optional<EulerFactor> px;
  if (cfg.model != ModelKind::hp) px.emplace(cfg.X, cfg.kernel);
  const long double base = zeros.base_value();

  parallel_for(grid.count, workers, [&](std::size_t i) {
    if (grid.skipped[i]) return;
    const std::size_t n = grid.first + i;
    const auto& xs = grid.x[i];
    const auto& ref = grid.reference[i];
    const double anchor = ref[xs.size() / 2];
    double worst = 0.0;
    if (cfg.model == ModelKind::hp) {
      const HadamardWindow w(zeros, n, cfg.m);
      for (std::size_t d = 0; d < xs.size(); ++d) {
        worst = std::max(worst, std::fabs(anchor * w.ratio_at(xs[d]) - ref[d]));
      }
    } else {
      require_window(zeros, n, cfg.m);
      const double eta = 0.5 * (zeros.offsets[n] + zeros.offsets[n + 1]);
      const double le = px->log_value(base + eta) + log_zx(eta, n, zeros, cfg.m, cfg.X);
      for (std::size_t d = 0; d < xs.size(); ++d) {
        const double t = eta + xs[d];
        const double lt = px->log_value(base + t) + log_zx(t, n, zeros, cfg.m, cfg.X);
        const double model = cfg.model == ModelKind::ehp ? std::exp(lt) : anchor * std::exp(lt - le);
        worst = std::max(worst, std::fabs(model - ref[d]));
      }
    }
    r.interval_max_errors[i] = worst;
  });

  for (std::size_t i = 0; i < grid.count; ++i) {
    if (grid.skipped[i]) {
      ++r.skipped_intervals;
      continue;
    }
    r.linf_error = std::max(r.linf_error, r.interval_max_errors[i]);
  }
  r.grid_points_used = grid.points;
  return r;
}

std::vector<ExperimentResult> run_experiment(const ZeroList& zeros, std::size_t first, std::size_t count,
                                             const std::vector<LocalModelConfig>& cfgs, const std::string& id,
                                             unsigned workers) {
  const ExperimentGrid grid = build_grid(zeros, first, count, workers);
  std::vector<ExperimentResult> out;
  out.reserve(cfgs.size());
  for (const auto& cfg : cfgs) out.push_back(run_experiment(zeros, grid, cfg, id, workers));
  return out;
}

std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t r = 1; r < errors.size(); ++r) {
    if (errors[r] > 0.0 && errors[r - 1] > 0.0) {
      out[r] = (std::log(errors[r]) - std::log(errors[r - 1])) / std::log(0.5);
    }
  }
  return out;
}

std::string render_experiment_report(const std::vector<ExperimentResult>& results) {
  // Columns keyed by model label, rows by m; repeated experiments are averaged.
  std::map<std::string, std::map<int, std::pair<double, int>>> columns;
  std::vector<std::string> order;
  for (const auto& r : results) {
    const std::string label = r.config.label();
    if (!columns.count(label)) order.push_back(label);
    auto& cell = columns[label][r.config.m];
    cell.first += r.linf_error;
    ++cell.second;
  }
  std::string out;
  char buf[256];
  for (const auto& label : order) {
    const auto& col = columns[label];
    std::snprintf(buf, sizeof buf, "# %s\n%8s %14s %10s %6s\n", label.c_str(), "m", "Linf", "C_r", "runs");
    out += buf;
    std::vector<double> errs;
    std::vector<int> ms;
    std::vector<int> runs;
    for (const auto& [m, cell] : col) {
      ms.push_back(m);
      errs.push_back(cell.first / cell.second);
      runs.push_back(cell.second);
    }
    const auto rates = convergence_rates(errs);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const bool doubling = i > 0 && ms[i] == 2 * ms[i - 1];
      if (rates[i] && doubling) {
        std::snprintf(buf, sizeof buf, "%8d %14.6g %10.4f %6d\n", ms[i], errs[i], *rates[i], runs[i]);
      } else {
        std::snprintf(buf, sizeof buf, "%8d %14.6g %10s %6d\n", ms[i], errs[i], "-", runs[i]);
      }
      out += buf;
    }
  }
  return out;
}

}  // namespace zm::local
