#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace zm {

/// Neumaier's variant of Kahan summation. Order of additions is the caller's
/// responsibility; the result is reproducible for a fixed order.
template <class T = double>
class CompensatedSum {
 public:
  void add(T x) noexcept {
    const T t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) noexcept {
    add(x);
    return *this;
  }
  T value() const noexcept { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

double compensated_sum(std::span<const double> xs) noexcept;

}  // namespace zm
