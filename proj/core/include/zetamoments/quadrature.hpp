#pragma once

#include <functional>
#include <span>
#include <vector>

namespace zm {

struct RombergResult {
  double value = 0.0;
  double posteriori_error = 0.0;  ///< |R(m,m) - R(m-1,m-1)| at the last level
  long evals = 0;
  int level = 0;
  bool converged = false;
};

struct RombergOptions {
  double abs_target = 1e-10;
  long cap = 2048;     ///< maximum integrand evaluations
  int min_level = 2;   ///< never stop before this tableau level
};

/// Closed Romberg quadrature on [a, b] (trapezoid sequence with Richardson
/// extrapolation). Stops when the diagonal difference falls below abs_target
/// or the next level would exceed the evaluation cap; in the latter case the
/// best value is returned with converged = false.
RombergResult romberg(const std::function<double(double)>& f, double a, double b, const RombergOptions& opts);
RombergResult romberg(const std::function<double(double)>& f, double a, double b, double abs_target,
                      long cap = 2048);

/// Open Romberg on the midpoint sequence (tripling), for integrands that are
/// singular at the endpoints. Extrapolation uses ratios of 9.
RombergResult romberg_open(const std::function<double(double)>& f, double a, double b, const RombergOptions& opts);

/// Several integrands sharing abscissas. f(x, out) fills out[i] for each
/// component; component i freezes at the first level where it meets
/// abs_targets[i], and the sweep stops once all have converged or the cap is hit.
using VectorIntegrand = std::function<void(double, std::span<double>)>;
std::vector<RombergResult> romberg_vector(const VectorIntegrand& f, std::size_t components, double a, double b,
                                          std::span<const double> abs_targets, long cap, int min_level = 2);
std::vector<RombergResult> romberg_open_vector(const VectorIntegrand& f, std::size_t components, double a,
                                               double b, std::span<const double> abs_targets, long cap,
                                               int min_level = 2);

}  // namespace zm
