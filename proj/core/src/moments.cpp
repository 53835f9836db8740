#include "zetamoments/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "zetamoments/error.hpp"
#include "zetamoments/io.hpp"
#include "zetamoments/local_models.hpp"
#include "zetamoments/parallel.hpp"
#include "zetamoments/predictions.hpp"
#include "zetamoments/summation.hpp"

namespace zm::moments {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_expected(const HeightValue& T, int k) {
  if (k <= 0) return 0.0;
  return std::log(predict::leading_term_moment(T, k));
}

std::string format_two_k(double two_k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", two_k);
  return buf;
}

struct Sweep {
  std::vector<RombergResult> results;
  long evals = 0;
};

// Sweeps run in the local coordinate u = t - gamma_n on [0, w]: abscissas
// formed next to a large offset would be quantized at its ulp, and the node
// jitter is amplified by steep integrands such as |zeta|^12.
//
// Closed sweep for the nonnegative exponents; the endpoints are zeros, so
// their integrand values are known and cost nothing.
template <class Abs>
Sweep closed_sweep(double w, const std::vector<double>& two_ks, const std::vector<double>& targets, long cap,
                   Abs&& abs_at) {
  Sweep s;
  auto f = [&](double u, std::span<double> out) {
    double v = 0.0;
    if (u != 0.0 && u != w) {
      v = abs_at(u);
      ++s.evals;
    }
    for (std::size_t c = 0; c < two_ks.size(); ++c) out[c] = two_ks[c] == 0.0 ? 1.0 : std::pow(v, two_ks[c]);
  };
  s.results = romberg_vector(f, two_ks.size(), 0.0, w, targets, cap);
  return s;
}

// Negative exponents: u = w (3v^2 - 2v^3) turns the |u|^{2k} endpoint
// singularity into a bounded integrand on (0, 1).
template <class Abs>
Sweep open_sweep(double w, const std::vector<double>& two_ks, const std::vector<double>& targets, long cap,
                 Abs&& abs_at) {
  Sweep s;
  auto f = [&](double u, std::span<double> out) {
    const double x = w * u * u * (3.0 - 2.0 * u);
    const double jac = 6.0 * w * u * (1.0 - u);
    const double v = abs_at(x);
    ++s.evals;
    for (std::size_t c = 0; c < two_ks.size(); ++c) out[c] = jac * std::pow(v, two_ks[c]);
  };
  s.results = romberg_open_vector(f, two_ks.size(), 0.0, 1.0, targets, cap);
  return s;
}

}  // namespace

MomentExponent::MomentExponent(double v) : two_k(v) {
  if (!(v >= -0.5) || !std::isfinite(v)) throw DomainError("moment exponent 2k must be >= -0.5");
}

std::vector<MomentExponent> exponents(const std::vector<double>& two_ks) {
  std::vector<MomentExponent> out;
  for (double v : two_ks) out.emplace_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double AccuracyStandard::expected_moment(double two_k) const {
  const double k = 0.5 * two_k;
  if (k <= 0.0) return 1.0;
  const int k0 = static_cast<int>(std::floor(k));
  const double f = k - k0;
  if (f == 0.0) return std::exp(log_expected(T, k0));
  return std::exp((1.0 - f) * log_expected(T, k0) + f * log_expected(T, k0 + 1));
}

double AccuracyStandard::interval_target(double two_k) const {
  return relative * mean_spacing(T.value()) * expected_moment(two_k);
}

bool IntervalMoment::flagged() const {
  if (!quality_met) return true;
  return std::any_of(results.begin(), results.end(), [](const auto& kv) { return !kv.second.converged; });
}

IntervalMoment interval_moment(const ZeroList& zeros, std::size_t n, const std::vector<MomentExponent>& exps,
                               const AccuracyStandard& std, const std::optional<HpConfig>& hp, bool force_direct) {
  if (n + 1 >= zeros.size()) throw DomainError("interval index past the end of the zero list");
  if (zeros.gap_before(n + 1)) throw DomainError("interval " + std::to_string(n) + " spans a gap in the zero list");
  const double a = zeros.offsets[n];
  const double w = zeros.offsets[n + 1] - a;
  const long double start = zeros.base_value() + static_cast<long double>(a);

  IntervalMoment out;
  auto direct = [&](double u) {
    const zeta::AbsZeta z = zeta::abs_zeta_line(start, u, kDirectQuality);
    if (!z.quality_met) out.quality_met = false;
    return z.value;
  };

  out.midpoint_abs = direct(0.5 * w);
  out.evals = 1.0;

  std::vector<double> pos, neg, pos_t, neg_t;
  for (const auto& e : exps) {
    (e.two_k >= 0.0 ? pos : neg).push_back(e.two_k);
    (e.two_k >= 0.0 ? pos_t : neg_t).push_back(std::max(std::numeric_limits<double>::min(),
                                                       std.interval_target(e.two_k)));
  }

  auto integrate = [&](auto&& abs_at, double cost) {
    bool all_converged = true;
    if (!pos.empty()) {
      Sweep s = closed_sweep(w, pos, pos_t, std.romberg_cap, abs_at);
      out.evals += cost * static_cast<double>(s.evals);
      for (std::size_t c = 0; c < pos.size(); ++c) {
        out.results[pos[c]] = {s.results[c].value, s.results[c].posteriori_error, s.results[c].converged};
        all_converged = all_converged && s.results[c].converged;
      }
    }
    if (!neg.empty()) {
      Sweep s = open_sweep(w, neg, neg_t, std.romberg_cap, abs_at);
      out.evals += cost * static_cast<double>(s.evals);
      for (std::size_t c = 0; c < neg.size(); ++c) {
        out.results[neg[c]] = {s.results[c].value, s.results[c].posteriori_error, s.results[c].converged};
        all_converged = all_converged && s.results[c].converged;
      }
    }
    return all_converged;
  };

  bool use_hp = hp && !force_direct && out.midpoint_abs <= hp->threshold;
  const int m = hp ? hp->window / 2 : 0;
  if (use_hp && (n + 1 < static_cast<std::size_t>(m) || n + m >= zeros.size())) use_hp = false;

  if (use_hp) {
    const local::HadamardWindow win(zeros, n, m);
    const double anchor = out.midpoint_abs;
    auto model = [&](double u) { return anchor * win.ratio_at(u - 0.5 * w); };
    if (integrate(model, hp->cost)) {
      // Model error: HP converges linearly in m, so both I(m) - I(m/2) and
      // (I(m/2) - I(m/4)) / 2 estimate what the truncated window still misses.
      // One halving alone underestimates when the far zeros happen to balance.
      const std::map<double, ExponentResult> full = out.results;
      const local::HadamardWindow half(zeros, n, std::max(1, m / 2));
      auto coarse = [&](double u) { return anchor * half.ratio_at(u - 0.5 * w); };
      bool within = integrate(coarse, hp->cost);
      const std::map<double, ExponentResult> halved = out.results;
      const local::HadamardWindow quarter(zeros, n, std::max(1, m / 4));
      auto coarser = [&](double u) { return anchor * quarter.ratio_at(u - 0.5 * w); };
      within = integrate(coarser, hp->cost) && within;
      for (auto& [two_k, r] : out.results) {
        const ExponentResult& f = full.at(two_k);
        const double h = halved.at(two_k).value;
        const double model = std::max(std::fabs(f.value - h), 0.5 * std::fabs(h - r.value));
        const double err = f.error + model;
        within = within && err <= std.interval_target(two_k);
        r = {f.value, err, f.converged};
      }
      if (within) {
        out.method = zeta::EvalMethod::hp_model;
        return out;
      }
    }
    out.fell_back = true;
    out.results.clear();
  }
  integrate(direct, 1.0);
  out.method = zeta::EvalMethod::riemann_siegel;
  return out;
}

bool AuditEntry::ok() const { return std::fabs(hp_value - direct_value) <= bound; }

BlockRun block_moments(const ZeroList& zeros, const std::vector<ZeroBlock>& blocks,
                       const std::vector<MomentExponent>& exps, const AccuracyStandard& std,
                       const BlockRunOptions& opts) {
  // Flatten intervals; block b owns [offset[b], offset[b + 1]).
  std::vector<std::size_t> offset(blocks.size() + 1, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) offset[b + 1] = offset[b] + blocks[b].count;
  const std::size_t total = offset.back();
  std::vector<std::size_t> position(total);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].count; ++i) position[offset[b] + i] = blocks[b].start + i;
  }

  const double threshold = std::clamp(opts.audit_fraction, 0.0, 1.0);
  std::vector<IntervalMoment> results(total);
  std::vector<std::optional<IntervalMoment>> audits(total);
  parallel_for(total, opts.workers, [&](std::size_t i) {
    const std::size_t n = position[i];
    results[i] = interval_moment(zeros, n, exps, std, opts.hp);
    if (results[i].method == zeta::EvalMethod::hp_model) {
      const double u = static_cast<double>(splitmix64(opts.audit_seed ^ n) >> 11) * 0x1.0p-53;
      if (u < threshold) audits[i] = interval_moment(zeros, n, exps, std, std::nullopt, true);
    }
  });

  BlockRun run;
  run.intervals = total;
  run.records.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const ZeroBlock& blk = blocks[b];
    BlockRecord rec;
    rec.first_index = blk.first_index.value_or(0);
    rec.count = blk.count;
    rec.alpha = zeros.offsets[blk.start];
    rec.beta = zeros.offsets[blk.end];
    std::map<double, CompensatedSum<double>> val, err;
    for (const auto& e : exps) {
      val[e.two_k];
      err[e.two_k];
    }
    CompensatedSum<double> evals;
    std::size_t hp_count = 0;
    for (std::size_t i = offset[b]; i < offset[b + 1]; ++i) {
      const IntervalMoment& r = results[i];
      for (const auto& [two_k, res] : r.results) {
        val[two_k].add(res.value);
        err[two_k].add(res.error);
        if (!res.converged) {
          rec.flaws.push_back("interval " + std::to_string(position[i]) + " 2k=" + format_two_k(two_k) +
                              " not converged");
        }
      }
      if (!r.quality_met) rec.flaws.push_back("interval " + std::to_string(position[i]) + " |zeta| quality not met");
      if (r.flagged()) ++run.flagged_intervals;
      evals.add(r.evals);
      if (r.method == zeta::EvalMethod::hp_model) ++hp_count;
      if (audits[i]) {
        evals.add(audits[i]->evals);
        for (const auto& [two_k, res] : r.results) {
          const ExponentResult& d = audits[i]->results.at(two_k);
          AuditEntry a{position[i], two_k, res.value, d.value, res.error + d.error};
          if (!a.ok()) {
            rec.flaws.push_back("audit interval " + std::to_string(position[i]) + " 2k=" + format_two_k(two_k) +
                                " HP and direct differ beyond bounds");
          }
          run.audit.push_back(a);
        }
      }
    }
    for (auto& [two_k, s] : val) rec.moments[two_k] = s.value();
    for (auto& [two_k, s] : err) rec.errors[two_k] = s.value();
    rec.evals = evals.value();
    rec.hp_fraction = blk.count ? static_cast<double>(hp_count) / static_cast<double>(blk.count) : 0.0;
    run.records.push_back(std::move(rec));
  }
  return run;
}

BlockRecord merge_records(const std::vector<BlockRecord>& records) {
  if (records.empty()) throw DomainError("merge_records needs at least one record");
  BlockRecord out;
  out.first_index = records.front().first_index;
  out.alpha = records.front().alpha;
  out.beta = records.back().beta;
  std::map<double, CompensatedSum<double>> val, err;
  CompensatedSum<double> evals, hp;
  for (const auto& r : records) {
    out.count += r.count;
    for (const auto& [k, v] : r.moments) val[k].add(v);
    for (const auto& [k, v] : r.errors) err[k].add(v);
    evals.add(r.evals);
    hp.add(r.hp_fraction * static_cast<double>(r.count));
    out.flaws.insert(out.flaws.end(), r.flaws.begin(), r.flaws.end());
  }
  for (auto& [k, s] : val) out.moments[k] = s.value();
  for (auto& [k, s] : err) out.errors[k] = s.value();
  out.evals = evals.value();
  out.hp_fraction = out.count ? hp.value() / static_cast<double>(out.count) : 0.0;
  return out;
}

std::vector<double> shifted_fourth_moment(const ZeroList& zeros, std::size_t first, std::size_t last,
                                          const std::vector<double>& alphas, const AccuracyStandard& std,
                                          unsigned workers, std::vector<std::string>* flaws) {
  if (!(first < last) || last >= zeros.size()) throw DomainError("shifted moment needs first < last < size");
  for (double al : alphas) {
    if (!(al >= 0.0)) throw DomainError("shift alpha must be nonnegative");
  }
  const long double base = zeros.base_value();
  const std::size_t n_int = last - first;
  const std::size_t comps = alphas.size();
  const double target = std.interval_target(4.0);
  const std::vector<double> targets(comps, target);
  std::vector<std::vector<RombergResult>> per(n_int);
  std::vector<char> quality(n_int, 1);

  parallel_for(n_int, workers, [&](std::size_t i) {
    const std::size_t n = first + i;
    if (zeros.gap_before(n + 1)) throw DomainError("shifted moment span crosses a gap");
    const double w = zeros.offsets[n + 1] - zeros.offsets[n];
    const long double start = base + static_cast<long double>(zeros.offsets[n]);
    auto abs_at = [&](double u) {
      const zeta::AbsZeta z = zeta::abs_zeta_line(start, u, kDirectQuality);
      if (!z.quality_met) quality[i] = 0;
      return z.value;
    };
    auto f = [&](double u, std::span<double> out) {
      const double z0 = (u == 0.0 || u == w) ? 0.0 : abs_at(u);
      const double z02 = z0 * z0;
      for (std::size_t c = 0; c < comps; ++c) {
        const double z1 = alphas[c] == 0.0 ? z0 : abs_at(u + alphas[c]);
        out[c] = z02 * z1 * z1;
      }
    };
    per[i] = romberg_vector(f, comps, 0.0, w, targets, std.romberg_cap);
  });

  const double H = zeros.offsets[last] - zeros.offsets[first];
  std::vector<double> out(comps);
  for (std::size_t c = 0; c < comps; ++c) {
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < n_int; ++i) {
      s.add(per[i][c].value);
      if (flaws && !per[i][c].converged) {
        flaws->push_back("interval " + std::to_string(first + i) + " alpha=" + format_two_k(alphas[c]) +
                         " not converged");
      }
    }
    out[c] = s.value() / H;
  }
  if (flaws) {
    for (std::size_t i = 0; i < n_int; ++i) {
      if (!quality[i]) flaws->push_back("interval " + std::to_string(first + i) + " |zeta| quality not met");
    }
  }
  return out;
}

std::string render_block_file(const BlockFile& file) {
  std::string out = "ZETABLOCKS v1 base=" + file.base + "\n";
  for (const auto& c : file.comments) out += "# " + c + "\n";
  for (const auto& r : file.records) {
    out += std::to_string(r.first_index) + "," + std::to_string(r.count) + "," + io::format_double(r.alpha) + "," +
           io::format_double(r.beta) + ",";
    bool first = true;
    for (const auto& [two_k, v] : r.moments) {
      if (!first) out += ";";
      first = false;
      const auto e = r.errors.find(two_k);
      out += format_two_k(two_k) + ":" + io::format_double(v) + ":" +
             io::format_double(e == r.errors.end() ? 0.0 : e->second);
    }
    out += "," + io::format_double(r.evals) + "," + io::format_double(r.hp_fraction) + "\n";
    for (const auto& f : r.flaws) out += "# flaw " + std::to_string(r.first_index) + " " + f + "\n";
  }
  return out;
}

BlockFile parse_block_file(const std::string& text) {
  BlockFile file;
  std::vector<std::string> lines = io::split(text, '\n');
  if (lines.empty() || lines[0].rfind("ZETABLOCKS v1 base=", 0) != 0) {
    throw FormatError("block file must start with 'ZETABLOCKS v1 base='");
  }
  file.base = io::trim(lines[0].substr(std::string("ZETABLOCKS v1 base=").size()));
  if (file.base.empty()) throw FormatError("block file base is empty");
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::string line = io::trim(lines[ln]);
    if (line.empty()) continue;
    const std::string where = "block file line " + std::to_string(ln + 1);
    if (line[0] == '#') {
      const std::string body = io::trim(line.substr(1));
      if (body.rfind("flaw ", 0) == 0 && !file.records.empty()) {
        const std::size_t sp = body.find(' ', 5);
        if (sp != std::string::npos) {
          file.records.back().flaws.push_back(body.substr(sp + 1));
          continue;
        }
      }
      file.comments.push_back(body);
      continue;
    }
    const auto f = io::split(line, ',');
    if (f.size() != 7) throw FormatError(where + ": expected 7 comma-separated fields");
    BlockRecord r;
    try {
      const long long idx = io::parse_integer(f[0]);
      const long long cnt = io::parse_integer(f[1]);
      if (idx < 0 || cnt < 0) throw FormatError("negative index or count");
      r.first_index = static_cast<std::uint64_t>(idx);
      r.count = static_cast<std::size_t>(cnt);
      r.alpha = io::parse_double(f[2]);
      r.beta = io::parse_double(f[3]);
      if (!io::trim(f[4]).empty()) {
        for (const auto& item : io::split(f[4], ';')) {
          const auto parts = io::split(item, ':');
          if (parts.size() != 3) throw FormatError("moment entry must be two_k:value:err");
          const double two_k = io::parse_double(parts[0]);
          const double v = io::parse_double(parts[1]);
          const double e = io::parse_double(parts[2]);
          if (v < 0.0 || e < 0.0) throw FormatError("negative moment or error");
          r.moments[two_k] = v;
          r.errors[two_k] = e;
        }
      }
      r.evals = io::parse_double(f[5]);
      r.hp_fraction = io::parse_double(f[6]);
      if (!(r.hp_fraction >= 0.0 && r.hp_fraction <= 1.0)) throw FormatError("hp_fraction outside [0, 1]");
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    file.records.push_back(std::move(r));
  }
  return file;
}

void write_block_file(const BlockFile& file, const std::filesystem::path& path) {
  io::write_text(path, render_block_file(file));
}

BlockFile read_block_file(const std::filesystem::path& path) { return parse_block_file(io::read_text(path)); }

}  // namespace zm::moments
