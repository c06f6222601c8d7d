#pragma once

// Deterministic sampling for property tests: the draws depend only on the
// seed, not on the standard library's distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "padicsum/polynomial.hpp"

namespace testing_support {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do v = gen_();
    while (v >= limit);
    return v % n;
  }
  /// Uniform in [lo, hi].
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  /// Uniform unit residue mod p^k (k >= 1).
  long unit(long p, int k = 1) {
    long M = 1;
    for (int i = 0; i < k; ++i) M *= p;
    long v;
    do v = range(1, M - 1);
    while (v % p == 0);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

/// Integer polynomial of exact degree d with coefficients in [-bound, bound].
inline padicsum::PadicPoly random_int_poly(Rng& rng, padicsum::Prime p, int d, long bound) {
  std::vector<padicsum::Rational> c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = rng.range(-bound, bound);
  while (c[d] == 0) c[d] = rng.range(-bound, bound);
  return padicsum::PadicPoly(p, c);
}

/// a/b in lowest terms.
inline padicsum::Rational frac(const padicsum::Integer& a, const padicsum::Integer& b) {
  padicsum::Rational r(a, b);
  r.canonicalize();
  return r;
}

inline padicsum::Rational p_power(padicsum::Prime p, long j) {
  using padicsum::Integer;
  using padicsum::Rational;
  if (j >= 0) return Rational(padicsum::pow(p, static_cast<unsigned long>(j)));
  return Rational(Integer(1), padicsum::pow(p, static_cast<unsigned long>(-j)));
}

}  // namespace testing_support
