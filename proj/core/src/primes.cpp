#include "zetamoments/primes.hpp"

#include <algorithm>
#include <cmath>

namespace zm {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<PrimePower> prime_powers_up_to(std::uint32_t limit) {
  std::vector<PrimePower> out;
  for (std::uint32_t p : primes_up_to(limit)) {
    const double lp = std::log(static_cast<double>(p));
    for (std::uint64_t q = p; q <= limit; q *= p) {
      out.push_back({static_cast<std::uint32_t>(q), p, lp});
    }
  }
  std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
  return out;
}

double von_mangoldt(std::uint32_t n) {
  if (n < 2) return 0.0;
  std::uint32_t m = n;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(n));  // n itself is prime
}

}  // namespace zm
