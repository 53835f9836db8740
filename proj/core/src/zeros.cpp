#include "zetamoments/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "zetamoments/error.hpp"
#include "zetamoments/io.hpp"
#include "zetamoments/parallel.hpp"
#include "zetamoments/specfun.hpp"
#include "zetamoments/zeta_eval.hpp"

namespace zm {

namespace {

constexpr long double kPiL = specfun::kPiL;
constexpr long double kTwoPiL = 2.0L * specfun::kPiL;
constexpr long double kMinHeight = 10.0L;

double z_at(long double t) { return zeta::hardy_z(t).value; }

bool gram_good(long long j, double z) { return (j % 2 == 0) ? z > 0.0 : z < 0.0; }

int sign_of(double z) { return z < 0.0 ? -1 : 1; }

// One Gram interval [g_j, g_{j+1}] sampled at increasing points.
struct Cell {
  std::vector<long double> t;
  std::vector<double> z;
};

int sign_changes(const Cell& c) {
  int n = 0;
  for (std::size_t i = 1; i < c.z.size(); ++i) n += sign_of(c.z[i]) != sign_of(c.z[i - 1]);
  return n;
}

void subdivide(Cell& c, int pieces, std::uint64_t& evals) {
  const long double lo = c.t.front();
  const long double hi = c.t.back();
  Cell out;
  out.t.reserve(pieces + 1);
  out.z.reserve(pieces + 1);
  out.t.push_back(lo);
  out.z.push_back(c.z.front());
  std::size_t old = 1;
  for (int i = 1; i < pieces; ++i) {
    const long double t = lo + (hi - lo) * i / pieces;
    while (old + 1 < c.t.size() && c.t[old] <= t) {
      out.t.push_back(c.t[old]);
      out.z.push_back(c.z[old]);
      ++old;
    }
    if (out.t.back() == t) continue;
    out.t.push_back(t);
    out.z.push_back(z_at(t));
    ++evals;
  }
  for (; old < c.t.size(); ++old) {
    out.t.push_back(c.t[old]);
    out.z.push_back(c.z[old]);
  }
  c = std::move(out);
}

double refine_tolerance(long double t, const IsolationOptions& opts) {
  if (opts.tolerance > 0.0) return opts.tolerance;
  return 1e-9 * std::max(1.0, static_cast<double>(t) / 1e6);
}

std::string base_for(long double t) { return HeightValue::from_long_double(t).base(); }

}  // namespace

long double ZeroList::base_value() const { return decimal::to_long_double(base); }

long double ZeroList::ordinate(std::size_t i) const {
  return base_value() + static_cast<long double>(offsets.at(i));
}

HeightValue ZeroList::height(std::size_t i) const {
  const double off = offsets.at(i);
  if (off < HeightValue::kOffsetLimit) return HeightValue(base, off);
  return HeightValue(base, 0.0).shifted(off);
}

bool ZeroList::gap_before(std::size_t i) const {
  return std::binary_search(gaps.begin(), gaps.end(), i);
}

std::optional<std::uint64_t> ZeroList::index_of(std::size_t i) const {
  if (!first_index) return std::nullopt;
  if (!gaps.empty() && gaps.front() <= i) return std::nullopt;
  return *first_index + i;
}

void ZeroList::validate_and_mark_gaps() {
  gaps.clear();
  const long double b = base_value();
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (!(offsets[i] > offsets[i - 1])) {
      throw FormatError("zero ordinates not strictly increasing at position " + std::to_string(i));
    }
    const long double t = b + static_cast<long double>(offsets[i - 1]);
    const double limit = 10.0 * mean_spacing(std::max(t, 20.0L));
    if (offsets[i] - offsets[i - 1] > limit) gaps.push_back(i);
  }
}

double mean_spacing(long double t) {
  return static_cast<double>(kTwoPiL / std::log(t / kTwoPiL));
}

long double gram_point_value(long long n) {
  if (n < -1) throw DomainError("Gram points are defined for n >= -1");
  const long double target = static_cast<long double>(n) * kPiL;
  long double t = 20.0L;
  if (n >= 3) {
    // theta ~ (t/2) log(t / 2 pi e) - pi/8 inverted with Lambert W; the true
    // root lies slightly to the left, and theta is convex, so Newton from the
    // right converges monotonically.
    const double m = (static_cast<double>(n) + 0.125) / std::exp(1.0);
    const long double w = boost::math::lambert_w0(m);
    t = std::max(20.0L, kTwoPiL * (static_cast<long double>(n) + 0.125L) / w + 1.0L);
  }
  for (int it = 0; it < 64; ++it) {
    const long double f = specfun::theta(t) - target;
    const long double step = f / static_cast<long double>(specfun::theta_derivative(static_cast<double>(t)));
    t -= step;
    if (std::fabs(step) <= 1e-15L * t) return t;
  }
  throw ConvergenceError("Gram point Newton iteration did not converge for n = " + std::to_string(n));
}

HeightValue gram_point(long long n) { return HeightValue::from_long_double(gram_point_value(n)); }

long long gram_index_below(long double t) {
  if (t < kMinHeight) throw DomainError("Gram indices are tracked for t >= 10");
  long long n = static_cast<long long>(std::floor(specfun::theta(t) / kPiL));
  // The floor can be off by one through rounding of theta at large t.
  while (n > -1 && gram_point_value(n) > t) --n;
  while (gram_point_value(n + 1) <= t) ++n;
  return n;
}

ZeroList isolate_zeros(long double t_lo, long double t_hi, std::optional<long long> expected_count,
                       const IsolationOptions& opts, IsolationReport* report) {
  if (!(t_lo >= kMinHeight)) throw DomainError("zero isolation requires t_lo >= 10");
  if (!(t_hi > t_lo)) throw DomainError("zero isolation requires t_hi > t_lo");
  if (opts.max_subdivision < 1) throw DomainError("max_subdivision must be positive");
  IsolationReport rep;

  // Enclosing good Gram points.
  long long a = gram_index_below(t_lo);
  while (!gram_good(a, z_at(gram_point_value(a)))) {
    ++rep.z_evaluations;
    if (a == -1) throw MissingZeroError("no good Gram point below range", 0.0, static_cast<double>(t_lo));
    --a;
  }
  long long b = gram_index_below(t_hi) + 1;
  while (!gram_good(b, z_at(gram_point_value(b)))) {
    ++rep.z_evaluations;
    ++b;
  }
  rep.gram_lo = a;
  rep.gram_hi = b;
  rep.expected = b - a;

  const std::size_t cells_n = static_cast<std::size_t>(b - a);
  std::vector<long double> gram(cells_n + 1);
  std::vector<double> zg(cells_n + 1);
  parallel_for(cells_n + 1, opts.workers, [&](std::size_t i) {
    gram[i] = gram_point_value(a + static_cast<long long>(i));
    zg[i] = z_at(gram[i]);
  });
  rep.z_evaluations += cells_n + 1;

  std::vector<Cell> cells(cells_n);
  for (std::size_t i = 0; i < cells_n; ++i) {
    cells[i].t = {gram[i], gram[i + 1]};
    cells[i].z = {zg[i], zg[i + 1]};
  }

  // Gram blocks between consecutive good Gram points.
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i <= cells_n; ++i) {
    if (gram_good(a + static_cast<long long>(i), zg[i])) good.push_back(i);
  }
  rep.gram_blocks = static_cast<int>(good.size()) - 1;

  std::vector<int> deficit(good.size(), 0);
  std::vector<std::uint64_t> block_evals(good.size(), 0);
  parallel_for(good.size() - 1, opts.workers, [&](std::size_t g) {
    const std::size_t lo = good[g];
    const std::size_t hi = good[g + 1];
    const int want = static_cast<int>(hi - lo);
    auto count = [&] {
      int n = 0;
      for (std::size_t c = lo; c < hi; ++c) n += sign_changes(cells[c]);
      return n;
    };
    int have = count();
    for (int pieces = 2; have < want && pieces <= opts.max_subdivision; pieces *= 2) {
      for (std::size_t c = lo; c < hi; ++c) subdivide(cells[c], pieces, block_evals[g]);
      have = count();
    }
    deficit[g] = want - have;
  });
  for (std::size_t g = 0; g + 1 < good.size(); ++g) {
    rep.z_evaluations += block_evals[g];
    if (block_evals[g] > 0) ++rep.subdivided_blocks;
  }

  // Brackets in increasing order.
  struct Bracket {
    long double lo, hi;
    double zlo;
  };
  std::vector<Bracket> brackets;
  for (const Cell& c : cells) {
    for (std::size_t i = 1; i < c.z.size(); ++i) {
      if (sign_of(c.z[i]) != sign_of(c.z[i - 1])) brackets.push_back({c.t[i - 1], c.t[i], c.z[i - 1]});
    }
  }
  rep.found = static_cast<long long>(brackets.size());
  if (rep.found != rep.expected) {
    std::size_t worst = 0;
    for (std::size_t g = 0; g + 1 < good.size(); ++g) {
      if (deficit[g] > deficit[worst]) worst = g;
    }
    const double lo = static_cast<double>(gram[good[worst]]);
    const double hi = static_cast<double>(gram[good[worst + 1]]);
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "missing zero: %lld sign changes between Gram points %lld and %lld, expected %lld; "
                  "suspect Gram block [%.6f, %.6f]",
                  rep.found, a, b, rep.expected, lo, hi);
    if (report) *report = rep;
    throw MissingZeroError(msg, lo, hi);
  }
  for (std::size_t g = 0; g + 1 < good.size(); ++g) rep.rosser_exceptions += deficit[g] != 0;

  // Refinement in offset coordinates.
  ZeroList out;
  out.base = base_for(brackets.empty() ? t_lo : std::min(t_lo, brackets.front().lo));
  const long double base = out.base_value();
  std::vector<double> roots(brackets.size());
  std::vector<std::uint64_t> root_evals(brackets.size(), 0);
  parallel_for(brackets.size(), opts.workers, [&](std::size_t i) {
    const Bracket& br = brackets[i];
    const double tol = refine_tolerance(br.hi, opts);
    std::uint64_t& evals = root_evals[i];
    auto f = [&](double x) {
      ++evals;
      return z_at(base + static_cast<long double>(x));
    };
    const double x0 = static_cast<double>(br.lo - base);
    const double x1 = static_cast<double>(br.hi - base);
    boost::uintmax_t max_iter = 200;
    auto stop = [tol](double l, double r) { return std::fabs(r - l) <= tol; };
    const double zlo = br.zlo;
    const double zhi = f(x1);
    if (zhi == 0.0) {
      roots[i] = x1;
      return;
    }
    const auto r = boost::math::tools::toms748_solve(f, x0, x1, zlo, zhi, stop, max_iter);
    roots[i] = 0.5 * (r.first + r.second);
  });
  for (auto e : root_evals) rep.z_evaluations += e;

  std::size_t below = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const long double t = base + static_cast<long double>(roots[i]);
    if (t < t_lo) {
      ++below;
      continue;
    }
    if (t > t_hi) break;
    if (!out.offsets.empty() && !(roots[i] > out.offsets.back())) {
      throw ConvergenceError("refined zeros out of order near t = " + std::to_string(static_cast<double>(t)));
    }
    out.offsets.push_back(roots[i]);
  }
  out.first_index = static_cast<std::uint64_t>(a + 2 + static_cast<long long>(below));
  if (report) *report = rep;
  if (expected_count && static_cast<long long>(out.size()) != *expected_count) {
    throw MissingZeroError("found " + std::to_string(out.size()) + " zeros, caller expected " +
                               std::to_string(*expected_count),
                           static_cast<double>(t_lo), static_cast<double>(t_hi));
  }
  return out;
}

ZeroList isolate_zero_indices(std::uint64_t first, std::uint64_t count, const IsolationOptions& opts,
                              IsolationReport* report) {
  if (first < 1 || count < 1) throw DomainError("zero indices are 1-based and count must be positive");
  // Zero number n lies near Gram point n - 2; widen by a few Gram intervals.
  const long long lo_gram = std::max<long long>(-1, static_cast<long long>(first) - 6);
  const long long hi_gram = static_cast<long long>(first + count) + 4;
  const long double t_lo = std::max(kMinHeight, gram_point_value(lo_gram));
  const long double t_hi = gram_point_value(hi_gram);
  ZeroList all = isolate_zeros(t_lo, t_hi, std::nullopt, opts, report);
  const std::uint64_t have_first = *all.first_index;
  if (have_first > first || have_first + all.size() < first + count) {
    throw MissingZeroError("index window did not cover the requested zeros", static_cast<double>(t_lo),
                           static_cast<double>(t_hi));
  }
  const std::size_t skip = static_cast<std::size_t>(first - have_first);
  ZeroList out;
  out.base = all.base;
  out.first_index = first;
  out.offsets.assign(all.offsets.begin() + static_cast<std::ptrdiff_t>(skip),
                     all.offsets.begin() + static_cast<std::ptrdiff_t>(skip + count));
  return out;
}

BlockTiling build_blocks(const ZeroList& zeros, std::size_t block_size) {
  if (block_size < 1) throw DomainError("block_size must be at least 1");
  BlockTiling tiling;
  const long double base = zeros.base_value();
  std::size_t start = 0;
  const std::size_t n = zeros.size();
  while (start + 1 < n) {
    const std::size_t end = start + block_size;
    bool gap = false;
    std::size_t resume = 0;
    for (std::size_t i = start + 1; i <= std::min(end, n - 1); ++i) {
      if (zeros.gap_before(i)) {
        gap = true;
        resume = i;
        break;
      }
    }
    if (gap) {
      tiling.skipped_for_gaps += resume - start;
      start = resume;
      continue;
    }
    if (end >= n) {
      tiling.dropped_tail = n - 1 - start;
      break;
    }
    ZeroBlock blk;
    blk.start = start;
    blk.end = end;
    blk.count = block_size;
    blk.first_index = zeros.index_of(start);
    blk.alpha = base + static_cast<long double>(zeros.offsets[start]);
    blk.beta = base + static_cast<long double>(zeros.offsets[end]);
    tiling.blocks.push_back(blk);
    start = end;  // shared endpoint
  }
  return tiling;
}

std::string render_zero_file(const ZeroList& zeros, const std::vector<std::string>& comments) {
  std::string payload = "ZETAZEROS v1\n";
  payload += "base=" + zeros.base + "\n";
  payload += "first_index=" + (zeros.first_index ? std::to_string(*zeros.first_index) : std::string("unknown")) + "\n";
  payload += "count=" + std::to_string(zeros.size()) + "\n";
  for (const auto& c : comments) payload += "# " + c + "\n";
  char buf[64];
  for (double x : zeros.offsets) {
    std::snprintf(buf, sizeof buf, "%.18g\n", x);
    payload += buf;
  }
  return payload + "sha256=" + io::sha256_hex(payload) + "\n";
}

ZeroList parse_zero_file(const std::string& text) {
  const auto sha_pos = text.rfind("sha256=");
  if (sha_pos == std::string::npos || (sha_pos > 0 && text[sha_pos - 1] != '\n')) {
    throw FormatError("zero file lacks a trailing sha256 line");
  }
  const std::string payload = text.substr(0, sha_pos);
  const std::string digest = io::trim(text.substr(sha_pos + 7));
  if (io::sha256_hex(payload) != digest) throw FormatError("zero file checksum mismatch");

  std::vector<std::string> lines = io::split(payload, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4 || lines[0] != "ZETAZEROS v1") throw FormatError("not a ZETAZEROS v1 file");
  auto field = [&](std::size_t i, const std::string& key) {
    if (lines[i].rfind(key + "=", 0) != 0) throw FormatError("expected '" + key + "=' on line " + std::to_string(i + 1));
    return lines[i].substr(key.size() + 1);
  };
  ZeroList out;
  out.base = decimal::canonical(field(1, "base"));
  const std::string fi = field(2, "first_index");
  if (fi != "unknown") {
    const long long v = io::parse_integer(fi);
    if (v < 1) throw FormatError("first_index must be positive");
    out.first_index = static_cast<std::uint64_t>(v);
  }
  const long long count = io::parse_integer(field(3, "count"));
  if (count < 0) throw FormatError("negative count");
  out.offsets.reserve(static_cast<std::size_t>(count));
  for (std::size_t i = 4; i < lines.size(); ++i) {
    if (!lines[i].empty() && lines[i][0] == '#') {
      out.comments.push_back(io::trim(lines[i].substr(1)));
      continue;
    }
    out.offsets.push_back(io::parse_double(lines[i]));
  }
  if (static_cast<long long>(out.offsets.size()) != count) throw FormatError("zero file count mismatch");
  out.validate_and_mark_gaps();
  return out;
}

void write_zero_file(const ZeroList& zeros, const std::filesystem::path& path,
                     const std::vector<std::string>& comments) {
  io::write_text(path, render_zero_file(zeros, comments));
}

ZeroList read_zero_file(const std::filesystem::path& path) { return parse_zero_file(io::read_text(path)); }

}  // namespace zm
