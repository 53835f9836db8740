#include "zetamoments/summation.hpp"

namespace zm {

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum<double> s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace zm
