#include "cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zetamoments/error.hpp"
#include "zetamoments/height.hpp"
#include "zetamoments/io.hpp"
#include "zetamoments/local_models.hpp"
#include "zetamoments/moments.hpp"
#include "zetamoments/parallel.hpp"
#include "zetamoments/predictions.hpp"
#include "zetamoments/statistics.hpp"
#include "zetamoments/zeros.hpp"

namespace zm::cli {
namespace {

namespace fs = std::filesystem;

// Flat `key = value` file; keys are long option names without dashes. Values
// only fill options that were not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path);
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty()) throw FormatError("config file " + path + ": sections are not supported");
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw FormatError("config file " + path + ": unknown key '" + item.name + "'");
    }
    if (opt->count() == 0) {
      opt->add_result(item.inputs);
      opt->run_callback();
    }
  }
}

// Resolved settings minus those that cannot change the output.
std::string resolved_config(const CLI::App* sub) {
  std::istringstream lines(sub->config_to_str(true, false));
  std::string out, line;
  while (std::getline(lines, line)) {
    if (line.rfind("workers=", 0) == 0 || line.rfind("config=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

struct Context {
  CLI::App* sub = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::string out_path;
  std::vector<std::pair<std::string, std::string>> inputs;

  io::Provenance provenance() const {
    io::Provenance p;
    p.config_hash = io::sha256_hex(resolved_config(sub));
    p.inputs = inputs;
    return p;
  }

  void add_input(const std::string& path) { inputs.emplace_back(fs::path(path).filename().string(), io::sha256_file(path)); }

  /// Provenance as comment bodies for zero and block files.
  std::vector<std::string> provenance_comments() const {
    std::vector<std::string> c;
    std::istringstream lines(provenance().render());
    std::string line;
    while (std::getline(lines, line)) c.push_back(line.substr(2));
    return c;
  }

  void write_sidecar(const std::string& path) const {
    if (!path.empty()) io::write_text(path + ".config", resolved_config(sub));
  }

  /// Text reports go to --out when given (with the resolved config beside
  /// them) and to stdout otherwise.
  void emit_report(const std::string& body) const {
    const std::string text = provenance().render() + body;
    if (out_path.empty()) {
      *out << text;
    } else {
      io::write_text(out_path, text);
      write_sidecar(out_path);
      *out << "wrote " << out_path << "\n";
    }
  }
};

std::string sci(double x, int digits = 6) { return fmt::format("{:.{}e}", x, digits - 1); }

// ---------------------------------------------------------------- zero input

struct ZeroInput {
  std::string zero_file;
  std::vector<std::string> range;
  std::vector<std::uint64_t> index_range;
  double tolerance = 0.0;

  void add_options(CLI::App* sub) {
    auto* f = sub->add_option("--zero-file", zero_file, "zero file to read");
    auto* r = sub->add_option("--range", range, "height range lo hi (exact decimals)")->expected(2);
    auto* i = sub->add_option("--zero-index-range", index_range, "first and last zero number (1-based, inclusive)")
                  ->expected(2);
    f->excludes(r)->excludes(i);
    r->excludes(i);
    sub->add_option("--refine-tolerance", tolerance, "absolute zero tolerance, 0 for the default");
  }

  bool given() const { return !zero_file.empty() || !range.empty() || !index_range.empty(); }

  ZeroList load(Context& ctx, unsigned workers, IsolationReport* report = nullptr) const {
    if (!zero_file.empty()) {
      ctx.add_input(zero_file);
      return read_zero_file(zero_file);
    }
    IsolationOptions opts;
    opts.workers = workers;
    opts.tolerance = tolerance;
    if (!range.empty()) {
      const long double lo = HeightValue::parse(range[0]).value();
      const long double hi = HeightValue::parse(range[1]).value();
      if (!(hi > lo)) throw DomainError("--range needs lo < hi");
      return isolate_zeros(lo, hi, std::nullopt, opts, report);
    }
    if (!index_range.empty()) {
      if (index_range[0] < 1 || index_range[1] < index_range[0]) {
        throw DomainError("--zero-index-range needs 1 <= first <= last");
      }
      return isolate_zero_indices(index_range[0], index_range[1] - index_range[0] + 1, opts, report);
    }
    throw DomainError("give one of --zero-file, --range, --zero-index-range");
  }
};

// ---------------------------------------------------------------- zeros

struct ZerosCmd {
  ZeroInput input;
  std::string out;
  unsigned workers = default_workers();

  void setup(CLI::App* sub) {
    input.add_options(sub);
    sub->add_option("--out", out, "zero file to write");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  }

  int run(Context& ctx) {
    if (!input.zero_file.empty()) throw DomainError("zeros computes zeros; use --range or --zero-index-range");
    if (out.empty()) throw DomainError("zeros needs --out");
    IsolationReport rep;
    ZeroList z = input.load(ctx, workers, &rep);
    std::vector<std::string> comments = ctx.provenance_comments();
    comments.push_back(fmt::format("gram_blocks={} subdivided={} rosser_exceptions={} expected={} found={}",
                                   rep.gram_blocks, rep.subdivided_blocks, rep.rosser_exceptions, rep.expected,
                                   rep.found));
    write_zero_file(z, out, comments);
    ctx.write_sidecar(out);
    *ctx.out << fmt::format("zeros {}\n", z.size());
    if (!z.empty()) {
      *ctx.out << "first " << z.height(0).to_string(16) << "\n";
      *ctx.out << "last  " << z.height(z.size() - 1).to_string(16) << "\n";
    }
    if (z.first_index) *ctx.out << "first_index " << *z.first_index << "\n";
    *ctx.out << fmt::format("gram blocks {} (subdivided {}, rosser exceptions {})\n", rep.gram_blocks,
                            rep.subdivided_blocks, rep.rosser_exceptions);
    *ctx.out << "wrote " << out << "\n";
    return kExitClean;
  }
};

// ---------------------------------------------------------------- moments

struct MomentsCmd {
  ZeroInput input;
  std::vector<double> two_k{2, 4, 6, 8, 10, 12};
  std::size_t block_size = 1000;
  long romberg_cap = 2048;
  double hp_threshold = 7.0;
  int hp_window = 1000;
  bool no_hp = false;
  double audit_fraction = 0.01;
  std::uint64_t audit_seed = 0x5eed;
  std::string out;
  std::string zero_out;
  unsigned workers = default_workers();

  void setup(CLI::App* sub) {
    input.add_options(sub);
    sub->add_option("--two-k", two_k, "exponents 2k")->delimiter(',');
    sub->add_option("--block-size", block_size, "zeros per block record")->check(CLI::PositiveNumber);
    sub->add_option("--romberg-cap", romberg_cap, "Romberg evaluation cap per interval")->check(CLI::Range(5L, 1L << 22));
    sub->add_option("--hp-threshold", hp_threshold, "use HP when midpoint |zeta| is at most this");
    sub->add_option("--hp-window", hp_window, "zeros supplied to HP (half per side)")->check(CLI::Range(2, 100000));
    sub->add_flag("--no-hp", no_hp, "integrate every interval directly");
    sub->add_option("--audit-fraction", audit_fraction, "share of HP intervals recomputed directly")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--audit-seed", audit_seed, "seed for the audit selection");
    sub->add_option("--out", out, "block file to write");
    sub->add_option("--zero-out", zero_out, "also write the zeros used");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  }

  int run(Context& ctx) {
    if (out.empty()) throw DomainError("moments needs --out");
    const auto exps = moments::exponents(two_k);
    ZeroList z = input.load(ctx, workers);
    if (z.size() < 2) throw DomainError("need at least two zeros");
    if (!zero_out.empty()) write_zero_file(z, zero_out, ctx.provenance_comments());

    const BlockTiling tiling = build_blocks(z, block_size);
    if (tiling.blocks.empty()) throw DomainError("not enough zeros for one block of " + std::to_string(block_size));
    moments::AccuracyStandard std;
    std.T = z.height(0);
    std.romberg_cap = romberg_cap;
    moments::BlockRunOptions opts;
    opts.workers = workers;
    opts.audit_fraction = audit_fraction;
    opts.audit_seed = audit_seed;
    if (!no_hp) opts.hp = moments::HpConfig{hp_threshold, hp_window, 0.2};
    const moments::BlockRun run = moments::block_moments(z, tiling.blocks, exps, std, opts);

    moments::BlockFile file;
    file.base = z.base;
    file.records = run.records;
    file.comments = ctx.provenance_comments();
    std::size_t audit_bad = 0;
    for (const auto& a : run.audit) audit_bad += a.ok() ? 0 : 1;
    double evals = 0.0, hp = 0.0;
    std::size_t intervals = 0;
    for (const auto& r : run.records) {
      evals += r.evals;
      hp += r.hp_fraction * static_cast<double>(r.count);
      intervals += r.count;
    }
    const std::string summary = fmt::format(
        "blocks={} intervals={} flagged={} hp_fraction={:.4f} evals_per_interval={:.2f} audits={} "
        "audit_violations={} dropped_tail={} skipped_for_gaps={}",
        run.records.size(), intervals, run.flagged_intervals, hp / static_cast<double>(intervals),
        evals / static_cast<double>(intervals), run.audit.size(), audit_bad, tiling.dropped_tail,
        tiling.skipped_for_gaps);
    file.comments.push_back(summary);
    moments::write_block_file(file, out);
    ctx.write_sidecar(out);
    *ctx.out << summary << "\nwrote " << out << "\n";

    std::vector<std::string> flaws;
    for (const auto& r : run.records) {
      for (const auto& f : r.flaws) flaws.push_back("block " + std::to_string(r.first_index) + ": " + f);
    }
    if (flaws.empty()) return kExitClean;
    *ctx.err << flaws.size() << " flaw(s)\n";
    for (std::size_t i = 0; i < flaws.size() && i < 20; ++i) *ctx.err << "  " << flaws[i] << "\n";
    if (flaws.size() > 20) *ctx.err << "  ...\n";
    return kExitFlaws;
  }
};

// ---------------------------------------------------------------- predict

predict::PredictionPolynomial leading_polynomial(int k) {
  predict::PredictionPolynomial p;
  p.k = k;
  p.coefficients.assign(static_cast<std::size_t>(k * k) + 1, 0.0);
  p.coefficients.back() = predict::leading_coefficient(k);
  p.provenance = predict::Provenance::leading_only;
  return p;
}

std::optional<predict::CoefficientTable> load_table(Context& ctx, const std::string& path) {
  if (path.empty()) return std::nullopt;
  ctx.add_input(path);
  return predict::read_coefficient_file(path);
}

struct PredictCmd {
  std::string mode = "full";
  std::string height;
  std::vector<std::string> range;
  std::vector<int> k{1, 2, 3, 4, 5, 6};
  std::vector<std::uint64_t> N{10, 100, 1000, 10000};
  std::string coeff_file;
  std::string out;

  void setup(CLI::App* sub) {
    sub->add_option("--mode", mode, "factors | leading | full | rmt4 | cue")
        ->check(CLI::IsMember({"factors", "leading", "full", "rmt4", "cue"}));
    auto* h = sub->add_option("--height", height, "height T (exact decimal)");
    auto* r = sub->add_option("--range", range, "height range lo hi (exact decimals)")->expected(2);
    h->excludes(r);
    sub->add_option("--k", k, "values of k (moment 2k)")->delimiter(',')->check(CLI::Range(1, 16));
    sub->add_option("--N", N, "matrix sizes for --mode cue")->delimiter(',')->check(CLI::PositiveNumber);
    sub->add_option("--coeff-file", coeff_file, "ZETAPK coefficient file for k >= 3");
    sub->add_option("--out", out, "report file");
  }

  int run(Context& ctx) {
    const auto table = load_table(ctx, coeff_file);
    const auto* tab = table ? &*table : nullptr;
    std::string body;
    if (mode == "factors") {
      body += fmt::format("{:>3} {:>14} {:>14} {:>14}\n", "k", "a(k)", "g(k)/k^2!", "a g/k^2!");
      for (int kk : k) {
        body += fmt::format("{:>3} {:>14} {:>14} {:>14}\n", kk, sci(predict::arithmetic_factor_a(kk)),
                            sci(predict::rmt_factor_g_over_fact(kk)), sci(predict::leading_coefficient(kk)));
      }
    } else if (mode == "leading" && !height.empty()) {
      const HeightValue T = HeightValue::parse(height);
      body += "# leading term a(k) g(k)/k^2! (log T)^{k^2} at T=" + T.to_string(16) + "\n";
      body += fmt::format("{:>6} {:>14}\n", "2k", "value");
      for (int kk : k) body += fmt::format("{:>6} {:>14}\n", 2 * kk, sci(predict::leading_term_moment(T, kk)));
    } else if (mode == "leading" || mode == "full") {
      if (range.empty()) {
        if (mode == "leading") throw DomainError("--mode leading needs --height or --range");
        if (height.empty()) throw DomainError("--mode full needs --range or --height");
        const HeightValue T = HeightValue::parse(height);
        const double x = std::log(static_cast<double>(T.value() / (2.0L * specfun::kPiL)));
        body += "# P_k(log(T/2pi)) at T=" + T.to_string(16) + "\n";
        body += fmt::format("{:>6} {:>14}\n", "2k", "value");
        for (int kk : k) body += fmt::format("{:>6} {:>14}\n", 2 * kk, sci(predict::polynomial_P(kk, tab)(x)));
      } else {
        const HeightValue lo = HeightValue::parse(range[0]);
        const HeightValue hi = HeightValue::parse(range[1]);
        const bool leading = mode == "leading";
        body += fmt::format("# mean of the {} prediction over [{}, {}]\n", leading ? "leading-term" : "full",
                            lo.to_string(16), hi.to_string(16));
        body += fmt::format("{:>6} {:>14}\n", "2k", "value");
        for (int kk : k) {
          const auto poly = leading ? leading_polynomial(kk) : predict::polynomial_P(kk, tab);
          body += fmt::format("{:>6} {:>14}\n", 2 * kk, sci(predict::prediction_mean(lo, hi, poly, leading)));
        }
      }
    } else if (mode == "rmt4") {
      const auto rmt = predict::rmt_polynomial_4();
      const auto p2 = predict::polynomial_P(2).mean_form();
      body += "# a(2) CUE moment in N against the published fourth moment polynomial (mean form)\n";
      body += fmt::format("{:>6} {:>14} {:>14}\n", "power", "rmt", "P2");
      for (int j = 4; j >= 0; --j) {
        body += fmt::format("{:>6} {:>14} {:>14}\n", j, sci(rmt.coefficients[j]), sci(p2[j]));
      }
    } else {
      body += fmt::format("{:>8} {:>3} {:>14} {:>14} {:>14}\n", "N", "k", "E|Z|^2k", "/N^{k^2}", "g(k)/k^2!");
      for (auto n : N) {
        for (int kk : k) {
          const double lc = predict::log_cue_moment(n, kk);
          const double scaled = std::exp(lc - kk * kk * std::log(static_cast<double>(n)));
          body += fmt::format("{:>8} {:>3} {:>14} {:>14} {:>14}\n", n, kk, sci(std::exp(lc)), sci(scaled),
                              sci(predict::rmt_factor_g_over_fact(kk)));
        }
      }
    }
    ctx.out_path = out;
    ctx.emit_report(body);
    return kExitClean;
  }
};

// ---------------------------------------------------------------- ratio

// Prediction polynomial for an exponent, or nullopt with a reason.
std::optional<predict::PredictionPolynomial> polynomial_for(double two_k, const predict::CoefficientTable* tab,
                                                            bool leading_only, std::string* why) {
  const double k = 0.5 * two_k;
  if (k < 1.0 || k != std::floor(k)) {
    *why = "no prediction polynomial for 2k=" + fmt::format("{:g}", two_k);
    return std::nullopt;
  }
  const int kk = static_cast<int>(k);
  if (leading_only) return leading_polynomial(kk);
  try {
    return predict::polynomial_P(kk, tab);
  } catch (const CoefficientsUnavailable& e) {
    *why = e.what();
    return std::nullopt;
  }
}

std::vector<double> file_exponents(const moments::BlockFile& file) {
  std::vector<double> out;
  if (!file.records.empty()) {
    for (const auto& [two_k, v] : file.records.front().moments) out.push_back(two_k);
  }
  return out;
}

struct RatioCmd {
  std::string block_file;
  std::string coeff_file;
  std::vector<double> two_k;
  std::vector<std::size_t> group{1, 10, 100};
  bool leading_only = false;
  std::string out;

  void setup(CLI::App* sub) {
    sub->add_option("--block-file", block_file, "block file");
    sub->add_option("--coeff-file", coeff_file, "ZETAPK coefficient file for k >= 3");
    sub->add_option("--two-k", two_k, "exponents (default: all in the file)")->delimiter(',');
    sub->add_option("--group", group, "block records per ratio sample")->delimiter(',')->check(CLI::PositiveNumber);
    sub->add_flag("--leading-only", leading_only, "divide by the leading-term prediction");
    sub->add_option("--out", out, "report file");
  }

  int run(Context& ctx) {
    if (block_file.empty()) throw DomainError("ratio needs --block-file");
    ctx.add_input(block_file);
    const auto file = moments::read_block_file(block_file);
    if (file.records.empty()) throw DomainError("block file has no records");
    const auto table = load_table(ctx, coeff_file);
    const auto exps = two_k.empty() ? file_exponents(file) : two_k;

    std::string body = "# ratio of empirical moment to prediction over the whole file\n";
    body += fmt::format("{:>6} {:>10} {:>12}\n", "2k", "zeros", "ratio");
    std::string groups = "# ratio samples per group size\n";
    groups += fmt::format("{:>6} {:>8} {:>8} {:>10} {:>10} {:>10} {:>10}\n", "2k", "group", "samples", "mean", "min",
                          "max", "sd");
    std::string notes;
    for (double e : exps) {
      std::string why;
      const auto poly = polynomial_for(e, table ? &*table : nullptr, leading_only, &why);
      if (!poly) {
        notes += "# skipped: " + why + "\n";
        continue;
      }
      std::vector<std::string> log;
      const auto whole = stats::ratios(file, e, *poly, file.records.size(), leading_only, &log);
      if (whole.empty()) {
        body += fmt::format("{:>6g} {:>10} {:>12}\n", e, "-", "gap");
      } else {
        body += fmt::format("{:>6g} {:>10} {:>12.6f}\n", e, whole[0].zeros, whole[0].ratio);
      }
      for (std::size_t g : group) {
        if (g > file.records.size()) continue;
        const auto rs = stats::ratios(file, e, *poly, g, leading_only, &log);
        if (rs.empty()) continue;
        const auto s = stats::summarize(stats::ratio_values(rs));
        groups += fmt::format("{:>6g} {:>8} {:>8} {:>10.5f} {:>10.5f} {:>10.5f} {:>10.5f}\n", e, g, s.count, s.mean,
                              s.min, s.max, s.sd);
      }
      for (const auto& l : log) notes += "# " + l + "\n";
    }
    ctx.out_path = out;
    ctx.emit_report(body + groups + notes);
    return kExitClean;
  }
};

// ---------------------------------------------------------------- stats

struct StatsCmd {
  std::string block_file;
  std::string analysis;
  double two_k = 2.0;
  std::string coeff_file;
  std::size_t group = 1;
  std::size_t max_lag = 40;
  std::optional<std::uint64_t> shuffle_seed;
  int p_max = 6;
  std::size_t n_max = 100;
  bool leading_only = false;
  std::string plot_out;
  std::string out;

  void setup(CLI::App* sub) {
    sub->add_option("--block-file", block_file, "block file");
    sub->add_option("--analysis", analysis, "momentsofmoments | logratio | autocov | extremes")
        ->check(CLI::IsMember({"momentsofmoments", "logratio", "autocov", "extremes"}));
    sub->add_option("--two-k", two_k, "exponent 2k");
    sub->add_option("--coeff-file", coeff_file, "ZETAPK coefficient file for k >= 3");
    sub->add_option("--group", group, "block records per sample")->check(CLI::PositiveNumber);
    sub->add_option("--max-lag", max_lag, "largest autocovariance lag");
    sub->add_option("--shuffle-seed", shuffle_seed, "randomize the sample order first (control run)");
    sub->add_option("--p-max", p_max, "highest standardized moment")->check(CLI::Range(3, 64));
    sub->add_option("--n-max", n_max, "largest contributions listed")->check(CLI::PositiveNumber);
    sub->add_flag("--leading-only", leading_only, "ratios against the leading-term prediction");
    sub->add_option("--plot-out", plot_out, "plot data file (autocov, extremes)");
    sub->add_option("--out", out, "report file");
  }

  int run(Context& ctx) {
    if (block_file.empty()) throw DomainError("stats needs --block-file");
    if (analysis.empty()) throw DomainError("stats needs --analysis");
    ctx.add_input(block_file);
    const auto file = moments::read_block_file(block_file);
    const auto table = load_table(ctx, coeff_file);
    // Extremes only need the numerators, which do not depend on the polynomial.
    const bool numerators = analysis == "extremes";
    std::string why;
    auto poly = polynomial_for(two_k, table ? &*table : nullptr, leading_only || numerators, &why);
    if (!poly) throw CoefficientsUnavailable(why);
    std::vector<std::string> log;
    const auto rs = stats::ratios(file, two_k, *poly, group, leading_only || numerators, &log);
    if (rs.size() < 2) throw DomainError("fewer than two samples");
    std::vector<double> xs;
    for (const auto& r : rs) xs.push_back(numerators ? r.numerator : r.ratio);
    if (shuffle_seed) {
      std::mt19937_64 rng(*shuffle_seed);
      std::shuffle(xs.begin(), xs.end(), rng);
    }

    std::string body = fmt::format("# 2k={:g} group={} samples={}{}\n", two_k, group, xs.size(),
                                   shuffle_seed ? " (shuffled)" : "");
    std::vector<std::pair<double, double>> plot;
    std::string figure;
    if (analysis == "momentsofmoments") {
      const auto m = stats::standardized_moments(xs, p_max);
      body += fmt::format("{:>4} {:>14}\n", "p", "moment");
      for (std::size_t i = 0; i < m.size(); ++i) body += fmt::format("{:>4} {:>14.6f}\n", i + 3, m[i]);
    } else if (analysis == "logratio") {
      const auto s = stats::log_ratio_stats(xs);
      body += fmt::format("{:>10} {:>10} {:>10} {:>10} {:>8}\n", "mean", "min", "max", "sd", "count");
      body += fmt::format("{:>10.5f} {:>10.5f} {:>10.5f} {:>10.5f} {:>8}\n", s.mean, s.min, s.max, s.sd, s.count);
    } else if (analysis == "autocov") {
      const auto ac = stats::autocovariance(xs, std::min(max_lag, xs.size() - 1));
      body += fmt::format("# bound 3/sqrt(R) = {:.5f}\n", 3.0 / std::sqrt(static_cast<double>(xs.size())));
      body += fmt::format("{:>4} {:>14} {:>10}\n", "m", "c_m", "c_m/c_0");
      for (std::size_t m = 0; m < ac.c.size(); ++m) {
        body += fmt::format("{:>4} {:>14} {:>10.5f}\n", m, sci(ac.c[m]), ac.rho[m]);
        plot.emplace_back(static_cast<double>(m), ac.rho[m]);
      }
      figure = "blockcorr";
    } else {
      const auto sc = stats::sorted_contributions(xs, n_max);
      const double k = 0.5 * two_k;
      const long double T = decimal::to_long_double(file.base) + static_cast<long double>(file.records.front().alpha);
      body += fmt::format("# predicted extreme exponent (1/2) sqrt(log log T / log M) = {:.5f}\n",
                          stats::extreme_exponent_prediction(T, static_cast<double>(xs.size())));
      body += fmt::format("{:>6} {:>12} {:>12}\n", "n", "f(n)", "n^{-k/5}");
      for (std::size_t n = 0; n < sc.f.size(); ++n) {
        body += fmt::format("{:>6} {:>12} {:>12}\n", n + 1, sci(sc.f[n]),
                            sci(stats::power_law(static_cast<double>(n + 1), k)));
        plot.emplace_back(static_cast<double>(n + 1), sc.f[n]);
      }
      body += fmt::format("{:>6} {:>12}\n", "n", "cumulative%");
      for (std::size_t n = 0; n < 5 && n < sc.cumulative_percent.size(); ++n) {
        body += fmt::format("{:>6} {:>12.4f}\n", n + 1, sc.cumulative_percent[n]);
      }
      figure = "powerlaw";
    }
    for (const auto& l : log) body += "# " + l + "\n";
    if (!plot_out.empty()) {
      if (figure.empty()) throw DomainError("--plot-out applies to autocov and extremes");
      std::vector<std::string> header;
      std::istringstream lines(ctx.provenance().render());
      std::string line;
      while (std::getline(lines, line)) header.push_back(line.substr(2));
      stats::write_plot_data(plot_out, figure, header, plot);
    }
    ctx.out_path = out;
    ctx.emit_report(body);
    return kExitClean;
  }
};

// ---------------------------------------------------------------- shifted

std::vector<double> parse_alpha_grid(const std::string& spec) {
  const auto parts = io::split(spec, ':');
  if (parts.size() != 3) throw DomainError("--alpha-grid expects lo:hi:step");
  return stats::alpha_grid(io::parse_double(parts[0]), io::parse_double(parts[1]), io::parse_double(parts[2]));
}

struct ShiftedCmd {
  ZeroInput input;
  std::size_t first = 0;
  std::size_t count = 0;
  std::string alpha_grid = "0:1.5:0.03";
  long romberg_cap = 2048;
  std::string figure = "smg1";
  std::string plot_out;
  std::string out;
  unsigned workers = default_workers();

  void setup(CLI::App* sub) {
    input.add_options(sub);
    sub->add_option("--first", first, "first zero (position in the list)");
    sub->add_option("--count", count, "intervals spanned, 0 for all");
    sub->add_option("--alpha-grid", alpha_grid, "lo:hi:step");
    sub->add_option("--romberg-cap", romberg_cap, "Romberg evaluation cap per interval")->check(CLI::Range(5L, 1L << 22));
    sub->add_option("--figure", figure, "figure name in the plot data header");
    sub->add_option("--plot-out", plot_out, "plot data file (alpha, ratio)");
    sub->add_option("--out", out, "report file");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  }

  int run(Context& ctx) {
    const ZeroList z = input.load(ctx, workers);
    if (first + 1 >= z.size()) throw DomainError("--first beyond the zero list");
    const std::size_t last = count == 0 ? z.size() - 1 : first + count;
    if (last >= z.size()) throw DomainError("--count runs past the zero list");
    const auto alphas = parse_alpha_grid(alpha_grid);
    moments::AccuracyStandard std;
    std.T = z.height(first);
    std.romberg_cap = romberg_cap;
    std::vector<std::string> flaws;
    const auto rows = stats::kernel_comparison(z, first, last, alphas, std, workers, &flaws);
    const double logT = std::log(static_cast<double>(z.ordinate(first)));
    std::string body = fmt::format("# T={} H={:.6f} intervals={}\n", z.height(first).to_string(16),
                                   static_cast<double>(z.ordinate(last) - z.ordinate(first)), last - first);
    body += fmt::format("{:>10} {:>10} {:>12} {:>12} {:>12}\n", "alpha", "alphalogT", "M/M0", "K", "M/M0-K");
    std::vector<std::pair<double, double>> plot;
    for (const auto& r : rows) {
      body += fmt::format("{:>10.5f} {:>10.5f} {:>12.8f} {:>12.8f} {:>12.8f}\n", r.alpha, r.alpha * logT, r.ratio, r.K,
                          r.ratio - r.K);
      plot.emplace_back(r.alpha, r.ratio);
    }
    for (const auto& f : flaws) body += "# flaw " + f + "\n";
    if (!plot_out.empty()) {
      std::vector<std::string> header;
      std::istringstream lines(ctx.provenance().render());
      std::string line;
      while (std::getline(lines, line)) header.push_back(line.substr(2));
      header.push_back("columns: alpha M(T,H;alpha)/M(T,H;0)");
      stats::write_plot_data(plot_out, figure, header, plot);
    }
    ctx.out_path = out;
    ctx.emit_report(body);
    if (flaws.empty()) return kExitClean;
    *ctx.err << flaws.size() << " flaw(s)\n";
    return kExitFlaws;
  }
};

// ---------------------------------------------------------------- localmodel

local::ModelKind parse_model(const std::string& s) {
  if (s == "hp") return local::ModelKind::hp;
  if (s == "ehp") return local::ModelKind::ehp;
  if (s == "ehp-normalized") return local::ModelKind::ehp_normalized;
  throw DomainError("unknown model '" + s + "' (hp, ehp, ehp-normalized)");
}

struct LocalModelCmd {
  std::string zero_file;
  std::size_t first = 0;
  std::size_t count = 1000;
  std::size_t experiments = 1;
  std::vector<std::string> models{"hp", "ehp", "ehp-normalized"};
  std::vector<int> m{2, 4, 8, 16, 32, 64, 128, 256};
  std::vector<double> X{6.0};
  std::string out;
  unsigned workers = default_workers();

  void setup(CLI::App* sub) {
    sub->add_option("--zero-file", zero_file, "zero file");
    sub->add_option("--first", first, "first interval of experiment 1 (0: just after the largest window)");
    sub->add_option("--count", count, "intervals per experiment")->check(CLI::PositiveNumber);
    sub->add_option("--experiments", experiments, "consecutive experiments")->check(CLI::PositiveNumber);
    sub->add_option("--models", models, "hp, ehp, ehp-normalized")->delimiter(',');
    sub->add_option("--m", m, "zeros per side")->delimiter(',')->check(CLI::PositiveNumber);
    sub->add_option("--X", X, "EHP cutoffs")->delimiter(',');
    sub->add_option("--out", out, "report file");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  }

  int run(Context& ctx) {
    if (zero_file.empty()) throw DomainError("localmodel needs --zero-file");
    ctx.add_input(zero_file);
    const ZeroList z = read_zero_file(zero_file);
    const int m_max = *std::max_element(m.begin(), m.end());
    const std::size_t start = first == 0 ? static_cast<std::size_t>(m_max) : first;
    if (start + 1 < static_cast<std::size_t>(m_max) || start + experiments * count + m_max > z.size()) {
      throw DomainError("zero list too short for the requested experiments and windows");
    }
    std::vector<local::LocalModelConfig> cfgs;
    for (const auto& name : models) {
      const auto kind = parse_model(name);
      for (double x : kind == local::ModelKind::hp ? std::vector<double>{6.0} : X) {
        for (int mm : m) {
          local::LocalModelConfig c;
          c.model = kind;
          c.m = mm;
          c.X = x;
          c.validate();
          cfgs.push_back(c);
        }
      }
    }
    std::vector<local::ExperimentResult> results;
    std::size_t points = 0, skipped = 0;
    for (std::size_t e = 0; e < experiments; ++e) {
      const auto grid = local::build_grid(z, start + e * count, count, workers);
      points += grid.points;
      for (bool s : grid.skipped) skipped += s ? 1 : 0;
      for (const auto& c : cfgs) {
        results.push_back(local::run_experiment(z, grid, c, fmt::format("experiment {}", e + 1), workers));
      }
    }
    std::string body = fmt::format("# experiments={} intervals_each={} first={} grid_points={} skipped_intervals={}\n",
                                   experiments, count, start, points, skipped);
    body += local::render_experiment_report(results);
    ctx.out_path = out;
    ctx.emit_report(body);
    return kExitClean;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of the Riemann zeta function on the critical line", "zetamoments"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", io::library_version());

  ZerosCmd zeros;
  MomentsCmd moments_cmd;
  PredictCmd predict_cmd;
  RatioCmd ratio;
  StatsCmd stats_cmd;
  ShiftedCmd shifted;
  LocalModelCmd localmodel;

  std::map<CLI::App*, std::function<int(Context&)>> handlers;
  std::map<CLI::App*, std::string> configs;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.setup(sub);
    sub->add_option("--config", configs[sub], "flat key = value file; flags override");
    handlers[sub] = [&cmd](Context& c) { return cmd.run(c); };
  };
  add("zeros", "isolate and refine zeros, write a zero file", zeros);
  add("moments", "integrate |zeta|^2k over zero intervals, write a block file", moments_cmd);
  add("predict", "prediction tables", predict_cmd);
  add("ratio", "empirical moments over predictions", ratio);
  add("stats", "statistics of block moment ratios", stats_cmd);
  add("shifted", "shifted fourth moment against the kernel K", shifted);
  add("localmodel", "HP and EHP approximation experiments", localmodel);

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitClean : kExitError;
  }

  for (auto& [sub, fn] : handlers) {
    if (!sub->parsed()) continue;
    try {
      if (!configs[sub].empty()) apply_config(sub, configs[sub]);
      Context ctx;
      ctx.sub = sub;
      ctx.out = &out;
      ctx.err = &err;
      return fn(ctx);
    } catch (const CLI::Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    } catch (const zm::Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return kExitError;
}

}  // namespace zm::cli
