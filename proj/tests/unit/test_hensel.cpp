#include <doctest.h>

#include "padicsum/error.hpp"
#include "padicsum/hensel.hpp"
#include "rng.hpp"

using namespace padicsum;
using testing_support::Rng;

namespace {

PadicPoly poly(long p, std::vector<Rational> c) { return PadicPoly(Prime(p), std::move(c)); }

bool vanishes_mod(const PadicPoly& f, const Rational& t, long N) {
  const Integer r = residue(t, f.prime(), N);
  const Integer M = pow(f.prime(), N);
  return residue(f(Rational(r)), f.prime(), N) == 0 && r < M;
}

}  // namespace

TEST_CASE("hypothesis checks") {
  const auto a = check_hypotheses(poly(5, {-6, 0, 1}), Rational(1), 1);
  CHECK(a.delta == Magnitude::power(-1));
  CHECK(a.lambda_plus == Magnitude());
  CHECK(a.hypotheses_met);
  const auto b = check_hypotheses(poly(5, {-5, 0, 1}), Rational(1), 1);
  CHECK(b.delta == Magnitude());
  CHECK_FALSE(b.hypotheses_met);
  CHECK(b.failing_condition == "lambda_+ * delta < 1");
  const auto c = check_hypotheses(poly(7, {0, 1}), Rational(0), 1);
  CHECK(c.delta.is_zero());
  CHECK(c.hypotheses_met);
  CHECK_THROWS_AS(check_hypotheses(poly(5, {-6, 0, 1}), Rational(0), 1), PreconditionError);
  CHECK_THROWS_AS(check_hypotheses(poly(5, {-6, 0, 1}), Rational(1, 5), 1), PreconditionError);
  CHECK_THROWS_AS(check_hypotheses(poly(5, {-6, 0, 1}), Rational(1), 3), PreconditionError);
}

TEST_CASE("lifting") {
  const PadicPoly phi = poly(5, {-6, 0, 1});
  const auto r = lift_root(phi, Rational(1), 1, 10);
  CHECK(vanishes_mod(phi, r.t, 10));
  CHECK(r.distance <= Magnitude::power(-1));
  CHECK(r.precision >= 10);

  const auto z = lift_root(poly(3, {0, 1}), Rational(0), 1, 50);
  CHECK(z.t == 0);
  CHECK(z.iterations == 0);

  // (t-1)(t-26): from 1 + 5^3 the lift lands on the root 1.
  const PadicPoly two = poly(5, {26, -27, 1});
  const auto s = lift_root(two, Rational(126), 1, 12);
  // Near the root 1, |phi(t)| = |t - 1| 5^-2.
  CHECK(residue(s.t, Prime(5), 10) == 1);
  // From 1 + 5 neither the L = 1 nor the L = 2 hypotheses hold.
  CHECK_FALSE(check_hypotheses(two, Rational(6), 1).hypotheses_met);
  CHECK_FALSE(check_hypotheses(two, Rational(6), 2).hypotheses_met);
  CHECK_THROWS_AS(lift_root(two, Rational(6), 1, 5), PreconditionError);
}

TEST_CASE("random lifts satisfy the conclusions") {
  Rng rng(31);
  int found = 0, with_failures = 0;
  for (int it = 0; it < 40000 && found < 150; ++it) {
    const long pv = std::vector<long>{3, 5, 7, 11}[rng.below(4)];
    const Prime p(pv);
    const int L = static_cast<int>(rng.range(1, 4));
    const int d = static_cast<int>(rng.range(L + 1, L + 3));
    // (t - r)^L g(t) + small perturbation keeps several derivatives balanced.
    PadicPoly base = poly(pv, {1});
    const long r = rng.range(0, 50);
    for (int i = 0; i < L; ++i) base = base * poly(pv, {-r, 1});
    std::vector<Rational> g(d - L + 1);
    for (auto& c : g) c = rng.range(-20, 20);
    g.back() = rng.range(1, 20);
    const PadicPoly phi = base * PadicPoly(p, g) + poly(pv, {Rational(rng.range(-3, 3)) * testing_support::p_power(p, rng.range(0, 6))});
    const Rational t0(r + pv * rng.range(0, 3));
    HenselCertificate cert;
    try {
      cert = check_hypotheses(phi, t0, L);
    } catch (const PreconditionError&) {
      continue;
    }
    if (!cert.hypotheses_met) continue;
    ++found;
    INFO("phi = ", phi.to_string(), " p = ", pv, " t0 = ", to_string(t0), " L = ", L);
    const auto root = lift_root(phi, t0, L, 10, false);
    CHECK(vanishes_mod(phi, root.t, 10));
    CHECK(root.distance <= cert.step_bound);
    if (!root.claim_failures.empty()) {
      ++with_failures;
      // Seen only on the boundary lambda_+ delta = 1.
      CHECK(L >= 2);
      CHECK(cert.lambda_plus * cert.delta == Magnitude());
    }
  }
  CHECK(found >= 100);
  MESSAGE(found, " instances, ", with_failures, " with a violated intermediate claim");
}

TEST_CASE("boundary instance violating an intermediate claim") {
  // lambda_+ delta = 1 and L = 3: |D_3| drops after one step, yet the root
  // is still reached within |phi(t0)/phi'(t0)|.
  const PadicPoly phi = poly(3, {524045, 573440, -253440, 20240, -595, 6});
  const auto cert = check_hypotheses(phi, Rational(35), 3);
  CHECK(cert.hypotheses_met);
  CHECK(cert.lambda_plus * cert.delta == Magnitude());
  CHECK_THROWS_AS(lift_root(phi, Rational(35), 3, 10), InternalError);
  const auto root = lift_root(phi, Rational(35), 3, 10, false);
  REQUIRE_FALSE(root.claim_failures.empty());
  CHECK(root.claim_failures.front() == "(3)_2 at k = 3");
  CHECK(vanishes_mod(phi, root.t, 10));
  CHECK(root.distance <= cert.step_bound);
}

TEST_CASE("newton polygons") {
  const auto a = newton_polygon(poly(5, {5, 1}));
  REQUIRE(a.segments.size() == 1);
  CHECK(a.segments[0].slope == Exponent(-1));
  CHECK(a.root_valuations[0] == std::pair<Exponent, int>(Exponent(1), 1));

  const auto b = newton_polygon(poly(5, {0, -25, 1}));
  CHECK(b.zero_roots == 1);
  REQUIRE(b.root_valuations.size() == 1);
  CHECK(b.root_valuations[0] == std::pair<Exponent, int>(Exponent(2), 1));

  const PadicPoly g = poly(5, {-1, 1}) * poly(5, {-5, 1}) * poly(5, {-10, 1});
  const auto c = newton_polygon(g);
  std::vector<std::pair<Exponent, int>> expect{{Exponent(1), 2}, {Exponent(0), 1}};
  CHECK(c.root_valuations == expect);

  // Ramified: z^2 - p has roots of valuation 1/2.
  const auto e = newton_polygon(poly(3, {-3, 0, 1}));
  CHECK(e.root_valuations == std::vector<std::pair<Exponent, int>>{{Exponent(1, 2), 2}});

  // Lengths sum to the degree span and slopes increase.
  Rng rng(32);
  for (int it = 0; it < 100; ++it) {
    const PadicPoly f = testing_support::random_int_poly(rng, Prime(3), static_cast<int>(rng.range(1, 7)), 200);
    const auto np = newton_polygon(f);
    int total = 0;
    for (std::size_t i = 0; i < np.segments.size(); ++i) {
      total += np.segments[i].length;
      if (i) CHECK(np.segments[i - 1].slope < np.segments[i].slope);
    }
    CHECK(total + np.zero_roots == f.degree());
    for (const auto& [i, v] : np.points) {
      // Every point lies on or above the hull.
      for (std::size_t s = 1; s < np.vertices.size(); ++s) {
        const auto& [x0, y0] = np.vertices[s - 1];
        const auto& [x1, y1] = np.vertices[s];
        if (i >= x0 && i <= x1) CHECK((v - y0) * (x1 - x0) >= (y1 - y0) * (i - x0));
      }
    }
  }
}

TEST_CASE("derivative zeros") {
  const auto a = derivative_zeros(poly(5, {0, 0, 1}), 6);
  int order0 = 0, order1 = 0;
  for (const auto& z : a) {
    CHECK(residue(z.value, Prime(5), 6) == 0);
    if (z.order == 0) {
      ++order0;
      CHECK_FALSE(z.resolved);  // double zero stays a box
    }
    if (z.order == 1) {
      ++order1;
      CHECK(z.exact);
    }
    CHECK(z.order <= 1);
  }
  CHECK(order0 == 1);
  CHECK(order1 == 1);

  const auto b = zeros_in_Zp(poly(5, {-6, 0, 1}), 10);
  REQUIRE(b.size() == 2);
  for (const auto& z : b) {
    CHECK(z.resolved);
    CHECK(z.error_radius <= Magnitude::power(-10));
    CHECK(vanishes_mod(poly(5, {-6, 0, 1}), z.value, 10));
  }
  CHECK(residue(b[0].value + b[1].value, Prime(5), 10) == 0);

  // (z-1)(z-2)(z-3) over Z_7: Q' has discriminant 12, a non-residue mod 7.
  const PadicPoly Q = poly(7, {-1, 1}) * poly(7, {-2, 1}) * poly(7, {-3, 1});
  std::vector<int> count(4, 0);
  for (const auto& z : derivative_zeros(Q, 8)) {
    ++count[z.order];
    CHECK(z.exact);
  }
  CHECK(count == std::vector<int>{3, 0, 1, 0});
}
