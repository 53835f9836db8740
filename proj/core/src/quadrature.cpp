#include "zetamoments/quadrature.hpp"

#include <cmath>

#include "zetamoments/error.hpp"
#include "zetamoments/summation.hpp"

namespace zm {

namespace {

// Shared tableau driver. `refine(level, sums)` adds the new abscissas of that
// level into per-component sums and returns evaluations spent; `estimate`
// turns accumulated sums into the level's base rule value.
template <class Refine, class Estimate>
std::vector<RombergResult> run_tableau(std::size_t components, std::span<const double> targets, long cap,
                                       int min_level, long (*evals_at)(int), double ratio, Refine refine,
                                       Estimate estimate) {
  if (targets.size() != components) throw DomainError("one Romberg target per component required");
  for (double t : targets) {
    if (!(t > 0.0)) throw DomainError("Romberg abs_target must be positive");
  }
  if (cap < evals_at(1)) throw DomainError("Romberg evaluation cap too small");

  std::vector<RombergResult> out(components);
  std::vector<bool> done(components, false);
  std::vector<std::vector<double>> prev(components), cur(components);
  std::vector<double> sums(components, 0.0);
  std::size_t remaining = components;

  for (int level = 0; remaining > 0; ++level) {
    if (evals_at(level) > cap) break;
    refine(level, std::span<double>(sums));
    for (std::size_t c = 0; c < components; ++c) {
      if (done[c]) continue;
      cur[c].assign(level + 1, 0.0);
      cur[c][0] = estimate(level, sums[c]);
      double factor = 1.0;
      for (int j = 1; j <= level; ++j) {
        factor *= ratio;
        cur[c][j] = cur[c][j - 1] + (cur[c][j - 1] - prev[c][j - 1]) / (factor - 1.0);
      }
      RombergResult& r = out[c];
      r.value = cur[c][level];
      r.level = level;
      r.evals = evals_at(level);
      if (level > 0) {
        r.posteriori_error = std::fabs(cur[c][level] - prev[c][level - 1]);
        if (level >= min_level && r.posteriori_error < targets[c]) {
          r.converged = true;
          done[c] = true;
          --remaining;
        }
      } else {
        r.posteriori_error = std::fabs(cur[c][0]);
      }
      std::swap(prev[c], cur[c]);
    }
  }
  return out;
}

long closed_evals(int level) { return (1L << level) + 1; }

long open_evals(int level) {
  long n = 1;
  for (int i = 0; i < level; ++i) n *= 3;
  return n;
}

}  // namespace

std::vector<RombergResult> romberg_vector(const VectorIntegrand& f, std::size_t components, double a, double b,
                                          std::span<const double> abs_targets, long cap, int min_level) {
  if (!(a < b)) throw DomainError("Romberg requires a < b");
  const double width = b - a;
  std::vector<double> buf(components);
  // sums hold the running sum of interior values plus half the endpoint values.
  auto refine = [&](int level, std::span<double> sums) {
    if (level == 0) {
      f(a, buf);
      for (std::size_t c = 0; c < components; ++c) sums[c] = 0.5 * buf[c];
      f(b, buf);
      for (std::size_t c = 0; c < components; ++c) sums[c] += 0.5 * buf[c];
      return;
    }
    const long n = 1L << (level - 1);
    const double h = width / static_cast<double>(2 * n);
    std::vector<CompensatedSum<double>> add(components);
    for (long i = 0; i < n; ++i) {
      f(a + h * static_cast<double>(2 * i + 1), buf);
      for (std::size_t c = 0; c < components; ++c) add[c].add(buf[c]);
    }
    for (std::size_t c = 0; c < components; ++c) sums[c] += add[c].value();
  };
  auto estimate = [&](int level, double sum) { return sum * width / static_cast<double>(1L << level); };
  return run_tableau(components, abs_targets, cap, min_level, closed_evals, 4.0, refine, estimate);
}

std::vector<RombergResult> romberg_open_vector(const VectorIntegrand& f, std::size_t components, double a,
                                               double b, std::span<const double> abs_targets, long cap,
                                               int min_level) {
  if (!(a < b)) throw DomainError("Romberg requires a < b");
  const double width = b - a;
  std::vector<double> buf(components);
  // Midpoints of 3^level cells; each tripling keeps the old midpoints and adds
  // two new points per old cell at +-1/3 of the old cell width.
  auto refine = [&](int level, std::span<double> sums) {
    if (level == 0) {
      f(a + 0.5 * width, buf);
      for (std::size_t c = 0; c < components; ++c) sums[c] = buf[c];
      return;
    }
    const long old_cells = open_evals(level - 1);
    const double old_h = width / static_cast<double>(old_cells);
    std::vector<CompensatedSum<double>> add(components);
    for (long i = 0; i < old_cells; ++i) {
      const double mid = a + old_h * (static_cast<double>(i) + 0.5);
      f(mid - old_h / 3.0, buf);
      for (std::size_t c = 0; c < components; ++c) add[c].add(buf[c]);
      f(mid + old_h / 3.0, buf);
      for (std::size_t c = 0; c < components; ++c) add[c].add(buf[c]);
    }
    for (std::size_t c = 0; c < components; ++c) sums[c] += add[c].value();
  };
  auto estimate = [&](int level, double sum) { return sum * width / static_cast<double>(open_evals(level)); };
  return run_tableau(components, abs_targets, cap, min_level, open_evals, 9.0, refine, estimate);
}

RombergResult romberg(const std::function<double(double)>& f, double a, double b, const RombergOptions& opts) {
  const double target = opts.abs_target;
  auto vf = [&](double x, std::span<double> out) { out[0] = f(x); };
  return romberg_vector(vf, 1, a, b, std::span<const double>(&target, 1), opts.cap, opts.min_level)[0];
}

RombergResult romberg(const std::function<double(double)>& f, double a, double b, double abs_target, long cap) {
  RombergOptions opts;
  opts.abs_target = abs_target;
  opts.cap = cap;
  return romberg(f, a, b, opts);
}

RombergResult romberg_open(const std::function<double(double)>& f, double a, double b, const RombergOptions& opts) {
  const double target = opts.abs_target;
  auto vf = [&](double x, std::span<double> out) { out[0] = f(x); };
  return romberg_open_vector(vf, 1, a, b, std::span<const double>(&target, 1), opts.cap, opts.min_level)[0];
}

}  // namespace zm
