#pragma once

// Reproducible polynomial corpora for audits.
//
//   dense        random integer coefficients with random p-power content
//   split        f' = a prod (x - n_i)^(e_i) with integer roots at chosen p-adic spacings
//   parametric   the three-root family f' = (x-n1)^f0 (x-n2)^e (x-n3)^e and the
//                cubic p^-(3r-2) t^3 + b0 p^-r t written as S_m of an integer polynomial

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "padicsum/bounds.hpp"

namespace padicsum {

/// Seeded generator whose draws do not depend on the standard library's distributions.
class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  long range(long lo, long hi);
  /// Uniform in [1, p^k) and prime to p.
  long unit(long p, int k = 1);

 private:
  std::mt19937_64 gen_;
};

enum class Family { Dense, Split, Parametric };
std::string family_name(Family f);

struct CorpusMember {
  std::size_t index = 0;
  Family family = Family::Dense;
  PadicPoly f{Prime(2)};
  unsigned m = 1;
  /// Factorization of f' for split and three-root members.
  std::optional<RootDatum> roots;
};

struct CorpusSpec {
  std::vector<long> primes{5, 7};
  int min_degree = 2;
  int max_degree = 3;
  unsigned min_m = 1;
  unsigned max_m = 3;
  std::size_t size = 50;
  std::uint64_t seed = 42;
  /// Only draw primes p > d.
  bool require_p_above_degree = true;
  std::vector<Family> families{Family::Dense, Family::Split, Family::Parametric};
  /// Upper limit on p^m.
  std::uint64_t max_pm = std::uint64_t{1} << 16;
};

/// f with f' = a prod (x - roots_i)^(mult_i) and f(0) = 0, scaled by the least
/// positive integer D that clears the denominators, so that f' = D a prod(...).
/// Requires D prime to p, which holds when p > deg f.
std::pair<PadicPoly, RootDatum> integrate_split(Prime p, const Integer& a, const std::vector<Integer>& roots,
                                                const std::vector<int>& mult);

/// Dense member of exact degree d.
PadicPoly dense_member(CorpusRng& rng, Prime p, int d, unsigned m);
/// Split member of degree d with root spacings p^-s, 0 <= s <= m.
std::pair<PadicPoly, RootDatum> split_member(CorpusRng& rng, Prime p, int d, unsigned m);

/// Members cycle through the requested families; degree, prime and m are
/// drawn per member. Deterministic in the spec.
std::vector<CorpusMember> generate_corpus(const CorpusSpec& spec);

}  // namespace padicsum
