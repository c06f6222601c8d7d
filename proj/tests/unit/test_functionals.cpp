#include <doctest.h>

#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"
#include "rng.hpp"

using namespace padicsum;
using testing_support::p_power;
using testing_support::Rng;

namespace {

PadicPoly poly(long p, std::vector<Rational> c) { return PadicPoly(Prime(p), std::move(c)); }

// Minimum of the pointwise functional over all residues mod p^M.
Magnitude exhaustive_inf(const PadicPoly& P, Functional f, long M) {
  const Integer N = pow(P.prime(), static_cast<unsigned long>(M));
  Magnitude best = functional_point(P, Rational(0), f).value;
  for (Integer t = 1; t < N; ++t) best = min(best, functional_point(P, Rational(t), f).value);
  return best;
}

PadicPoly random_scaled(Rng& rng, Prime p, int d, long m) {
  std::vector<Rational> c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = Rational(rng.range(-60, 60)) * p_power(p, -m);
  while (c[d] == 0) c[d] = Rational(rng.range(1, 60)) * p_power(p, -m);
  return PadicPoly(p, c);
}

// Section-5 phase a0 p^-(3r-2) t^3 + b0 p^-r t.
PadicPoly cubic_example(long p, long r, long a0, long b0) {
  const Prime q(p);
  return poly(p, {0, Rational(b0) * p_power(q, -r), 0, Rational(a0) * p_power(q, -(3 * r - 2))});
}

}  // namespace

TEST_CASE("h_point and j_point") {
  const auto a = h_point(poly(5, {0, 0, Rational(1, 125)}), Rational(0));
  CHECK(a.value == Magnitude::power(Exponent(3, 2)));
  CHECK(a.achieving_k == 2);
  for (long p : {2, 3, 7}) {
    const auto b = h_point(poly(p, {0, 1}), Rational(4));
    CHECK(b.value == Magnitude());
    CHECK(b.achieving_k == 1);
    CHECK(j_point(poly(p, {0, 1}), Rational(4)).value.is_zero());
  }
  for (long r : {1, 2, 3}) {
    const PadicPoly P = cubic_example(7, r, 1, 5);
    const Rational x = p_power(Prime(7), r - 1) * 3;
    CHECK(h_point(P, x).value == Magnitude::power(r));
    CHECK(j_point(P, x).value == Magnitude::power(Exponent(2 * r - 1, 2)));
  }
  // p^-m (b z^2 + e z) with |b| = p^-k.
  const Prime p(5);
  for (long m = 1; m <= 4; ++m)
    for (long k = 0; k <= m; ++k) {
      const PadicPoly P = poly(5, {0, Rational(3) * p_power(p, -m), Rational(2) * p_power(p, k - m)});
      for (int x : {0, 1, 7, 30})
        CHECK(j_point(P, Rational(x)).value == Magnitude::power(Exponent(m - k, 2)));
    }
  CHECK_THROWS_AS(h_point(poly(5, {0, 1}), Rational(1, 5)), PreconditionError);
}

TEST_CASE("infima match the exhaustive oracle") {
  CHECK(h_inf(poly(5, {0, 0, Rational(1, 125)})).value == Magnitude::power(Exponent(3, 2)));
  CHECK(h_inf(poly(3, {0, 1})).value == Magnitude());
  CHECK(j_inf(poly(3, {4, 1})).value.is_zero());
  for (long r : {1, 2}) CHECK(h_inf(cubic_example(7, r, 1, 5)).value == Magnitude::power(r));
  const Prime p(5);
  for (long m = 1; m <= 4; ++m)
    for (long k = 0; k <= m; ++k)
      CHECK(j_inf(poly(5, {0, 0, Rational(2) * p_power(p, k - m)})).value ==
            Magnitude::power(Exponent(m - k, 2)));

  Rng rng(21);
  for (long pv : {3, 5, 7}) {
    const Prime q(pv);
    for (int it = 0; it < 25; ++it) {
      const PadicPoly P = random_scaled(rng, q, static_cast<int>(rng.range(1, 4)), static_cast<long>(rng.range(0, 3)));
      for (Functional f : {Functional::H, Functional::J}) {
        const auto search = functional_infimum(P, f);
        const long M = certified_modulus(P, f);
        CHECK(search.certified_modulus == M);
        CHECK(search.value.value == exhaustive_inf(P, f, M));
        // The oracle is stable past the certified modulus.
        if (M <= 2) CHECK(exhaustive_inf(P, f, M + 1) == exhaustive_inf(P, f, M));
        // The reported witness attains the infimum.
        CHECK(functional_point(P, search.value.witness, f).value == search.value.value);
      }
    }
  }
}

TEST_CASE("certified balls are constant") {
  Rng rng(22);
  const Prime p(3);
  for (int it = 0; it < 40; ++it) {
    const PadicPoly P = random_scaled(rng, p, static_cast<int>(rng.range(2, 4)), 2);
    const long M = certified_modulus(P, Functional::H);
    const Integer N = pow(p, static_cast<unsigned long>(M + 1));
    for (Integer t = 0; t < 9; ++t) {
      const auto v = h_point(P, Rational(t));
      for (long j = 0; j <= M; ++j) {
        if (!certifies_constant(v.value, j)) continue;
        const Integer step = pow(p, static_cast<unsigned long>(j));
        for (Integer w = t; w < N; w += step) CHECK(h_point(P, Rational(w)).value == v.value);
        break;
      }
    }
  }
}

TEST_CASE("regions match pointwise membership") {
  CHECK(h_inf_region(poly(3, {0, 1}), Magnitude()).size() == 1);
  CHECK(h_inf_region(poly(3, {0, 1}), Magnitude()).front().radius_exponent == 0);
  CHECK(h_inf_region(poly(3, {0, 1}), Magnitude::power(1)).empty());

  Rng rng(23);
  for (long pv : {3, 5}) {
    const Prime p(pv);
    for (int it = 0; it < 30; ++it) {
      const PadicPoly P = random_scaled(rng, p, static_cast<int>(rng.range(1, 4)), static_cast<long>(rng.range(0, 3)));
      const long M = certified_modulus(P, Functional::H);
      const Magnitude T = Magnitude::power(Exponent(static_cast<long long>(rng.range(0, 6)), 2));
      const auto balls = h_inf_region(P, T);
      const Integer N = pow(p, static_cast<unsigned long>(M));
      Integer inside = 0;
      for (Integer t = 0; t < N; ++t) {
        const bool member = h_point(P, Rational(t)).value >= T;
        if (member) ++inside;
        int covering = 0;
        for (const auto& b : balls) {
          const Integer r = pow(p, static_cast<unsigned long>(b.radius_exponent));
          if ((t - b.center.get_num()) % r == 0) ++covering;
        }
        CHECK(covering == (member ? 1 : 0));
      }
      CHECK(measure(balls, p) == testing_support::frac(inside, N));
    }
  }
}

TEST_CASE("multivariate functional agrees with restrictions") {
  const Prime p(5);
  MultiPadicPoly P(p, 2);
  P.add_term({2, 0}, Rational(1, 125));
  P.add_term({0, 2}, Rational(1, 125));
  const MultiFunctional F(P);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const auto u = h_point(poly(5, {0, 0, Rational(1, 125)}), Rational(a)).value;
      const auto v = h_point(poly(5, {0, 0, Rational(1, 125)}), Rational(b)).value;
      CHECK(F.at({Integer(a), Integer(b)}) == max(u, v));
    }
  CHECK(F.certified_modulus() == 3);
}
