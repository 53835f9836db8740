#pragma once

#include <cstdint>
#include <vector>

namespace zm {

/// Primes up to and including `limit` (simple Eratosthenes sieve).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Prime power n = p^e with Lambda(n) = log p.
struct PrimePower {
  std::uint32_t n;
  std::uint32_t p;
  double log_p;
};

/// All prime powers n <= limit in increasing order.
std::vector<PrimePower> prime_powers_up_to(std::uint32_t limit);

/// von Mangoldt Lambda(n); zero unless n is a prime power.
double von_mangoldt(std::uint32_t n);

}  // namespace zm
