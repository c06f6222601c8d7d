#include <doctest.h>

#include "padicsum/congruence.hpp"
#include "padicsum/error.hpp"
#include "rng.hpp"

using namespace padicsum;
using testing_support::frac;
using testing_support::p_power;
using testing_support::Rng;

namespace {

PadicPoly poly(long p, std::vector<Rational> c) { return PadicPoly(Prime(p), std::move(c)); }

// Measure of {z : |R(z)| <= p^-L} by Taylor estimates on balls B(t, p^-j).
Rational ball_measure(const PadicPoly& R, long L, const Integer& t, long j) {
  const Prime p = R.prime();
  const auto dd = R.divided_derivatives(Rational(t));
  Magnitude tail = Magnitude::zero();
  for (std::size_t l = 1; l < dd.size(); ++l)
    tail = max(tail, Magnitude::of(dd[l], p) * Magnitude::power(-j * static_cast<long long>(l)));
  const Magnitude here = Magnitude::of(dd.empty() ? Rational(0) : dd[0], p);
  const Magnitude level = Magnitude::power(-L);
  if (here <= level && tail <= level) return p_power(p, -j);
  if (here > level && here > tail) return 0;
  Rational sum = 0;
  const Integer step = pow(p, static_cast<unsigned long>(j));
  for (unsigned long a = 0; a < p.value(); ++a) sum += ball_measure(R, L, t + step * a, j + 1);
  return sum;
}

}  // namespace

TEST_CASE("real comparison with magnitudes") {
  const Prime p(5);
  CHECK(compare_real(frac(1, 5), Magnitude::power(-1), p) == 0);
  CHECK(compare_real(frac(1, 4), Magnitude::power(-Exponent(1, 2)), p) < 0);
  CHECK(compare_real(frac(1, 2), Magnitude::power(-Exponent(1, 2)), p) > 0);
  CHECK(compare_real(Rational(3), Magnitude::power(Exponent(2, 3)), p) > 0);
  CHECK(compare_real(Rational(0), Magnitude::zero(), p) == 0);
}

TEST_CASE("solution counts") {
  const auto c = count_solutions(poly(5, {0, 0, 1}), Integer(0), 2);
  CHECK(c.N == 5);
  CHECK(c.normalized == frac(1, 5));
  CHECK(c.H_alpha == Magnitude::power(1));
  const auto a = congruence_audit(poly(5, {0, 0, 1}), 2);
  CHECK(a.sup == frac(1, 5));
  CHECK(a.capped == Magnitude::power(-1));
  CHECK(a.integral_valuation);
  CHECK(*a.lower_holds);
  CHECK(*a.improved_holds);
  CHECK(a.upper_ratio == doctest::Approx(1));

  for (long alpha = 1; alpha <= 4; ++alpha) {
    const auto x = count_solutions(poly(3, {0, 1}), Integer(-7), alpha);
    CHECK(x.N == 1);
    CHECK(x.normalized == p_power(Prime(3), -alpha));
    CHECK(x.H_alpha == Magnitude::power(alpha));
    const auto ax = congruence_audit(poly(3, {0, 1}), alpha);
    CHECK(ax.sup == p_power(Prime(3), -alpha));
  }

  const MultiPadicPoly Q(Prime(5), 2, {{{2, 0}, Rational(1)}, {{0, 2}, Rational(1)}});
  long direct = 0;
  for (long x = 0; x < 5; ++x)
    for (long y = 0; y < 5; ++y) direct += (x * x + y * y) % 5 == 0;
  const auto q = count_solutions(Q, Integer(0), 1);
  CHECK(q.N == static_cast<std::uint64_t>(direct));
  CHECK(q.n == 2);

  CHECK_THROWS_AS(count_solutions(poly(5, {0, frac(1, 5)}), Integer(0), 1), PreconditionError);
  CHECK_THROWS_AS(count_solutions(poly(7, {0, 0, 1}), Integer(0), 9, 1000), BudgetExceeded);
}

TEST_CASE("normalized counts are sublevel measures") {
  Rng rng(81);
  for (int it = 0; it < 40; ++it) {
    const Prime p(std::vector<long>{3, 5, 7}[rng.below(3)]);
    const PadicPoly Q = testing_support::random_int_poly(rng, p, static_cast<int>(rng.range(1, 5)), 40);
    const long alpha = rng.range(1, 3);
    const auto hist = residue_histogram(MultiPadicPoly(p, 1, [&] {
                                          std::map<MultiIndex, Rational> t;
                                          for (int i = 0; i <= Q.degree(); ++i) t[{i}] = Q.coeff(i);
                                          return t;
                                        }()),
                                        alpha);
    const Integer a = rng.range(0, static_cast<long>(hist.size()) - 1);
    const PadicPoly shifted = Q - poly(static_cast<long>(p.value()), {Rational(a)});
    const Rational m = ball_measure(shifted, alpha, Integer(0), 0);
    CHECK(frac(Integer(static_cast<unsigned long>(hist[a.get_ui()])), Integer(static_cast<unsigned long>(hist.size()))) == m);
  }
}

TEST_CASE("lower bound for one variable") {
  Rng rng(82);
  for (int it = 0; it < 40; ++it) {
    const Prime p(std::vector<long>{3, 5, 7}[rng.below(3)]);
    const PadicPoly Q = testing_support::random_int_poly(rng, p, static_cast<int>(rng.range(1, 4)), 60);
    const auto a = congruence_audit(Q, rng.range(1, 3));
    CHECK(*a.lower_holds);
    if (a.integral_valuation) CHECK(*a.improved_holds);
    else CHECK_FALSE(a.improved_holds.has_value());
    CHECK(a.sup > 0);
  }
}

TEST_CASE("sublevel sets") {
  const Prime p(5);
  const auto s = sublevel_set(poly(5, {0, 0, 1}), 2, 2);
  CHECK(s.modulus == 2);
  CHECK(s.measure == frac(1, 5));
  REQUIRE(s.members.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.members[i] == Integer(5 * static_cast<long>(i)));

  CHECK(sublevel_set(poly(5, {2, 5, 0, 5}), 3, 1).members.empty());
  CHECK(sublevel_set(poly(5, {2, 5, 0, 5}), 3, 1).measure == 0);

  // Denominators raise the modulus: 5^-1 z^2 needs |z^2| <= 5^-3.
  const auto d = sublevel_set(poly(5, {0, frac(1, 5), frac(1, 5)}), 2, 2);
  CHECK(d.modulus == 3);

  Rng rng(83);
  for (int it = 0; it < 30; ++it) {
    const Prime q(std::vector<long>{3, 5, 7}[rng.below(3)]);
    const int deg = static_cast<int>(rng.range(2, 4));
    PadicPoly Q = testing_support::random_int_poly(rng, q, deg, 50);
    if (rng.below(3) == 0) Q = Q.scaled(p_power(q, -1));
    const long L = rng.range(1, 3);
    const int k = static_cast<int>(rng.range(1, deg));
    const auto set = sublevel_set(Q, L, k);
    CHECK(set.measure == Rational(Integer(static_cast<unsigned long>(set.members.size()))) * p_power(q, -set.modulus));
    // Membership of arbitrary integers follows their residue.
    const Integer M = pow(q, static_cast<unsigned long>(set.modulus));
    for (int r = 0; r < 20; ++r) {
      const Integer z = rng.range(-100000, 100000);
      Integer red = z % M;
      if (red < 0) red += M;
      const bool listed = std::binary_search(set.members.begin(), set.members.end(), red);
      CHECK(listed == in_sublevel(Q, Rational(z), -L, 0, k));
    }
  }
  CHECK_THROWS_AS(sublevel_set(poly(5, {0, 1}), 0, 1), PreconditionError);
  CHECK_THROWS_AS(sublevel_set(poly(5, {0, 1}), 1, 2), PreconditionError);
}

TEST_CASE("containment near derivative zeros") {
  const auto v = containment_check(poly(5, {0, 0, 1}), 2, 2);
  CHECK(v.holds);
  CHECK(v.radius == Magnitude::power(-1));
  CHECK(v.flagged == 0);
  CHECK(v.worst_distance <= Magnitude::power(-1));

  // z^2 - 6 at 5^-4: members near the square roots of 6.
  const PadicPoly Q = poly(5, {-6, 0, 1});
  const auto w = containment_check(Q, 4, 2);
  CHECK(w.holds);
  CHECK_FALSE(w.set.members.empty());
  const Rational r1 = lift_root(Q, Rational(1), 1, 10).t;
  const Rational r2 = lift_root(Q, Rational(-1), 1, 10).t;
  for (const auto& z : w.set.members) {
    const Magnitude d = min(Magnitude::of(Rational(z - r1), Prime(5)), Magnitude::of(Rational(z - r2), Prime(5)));
    CHECK(d <= Magnitude::power(-2));
  }

  Rng rng(84);
  for (int it = 0; it < 30; ++it) {
    const Prime q(std::vector<long>{3, 5, 7}[rng.below(3)]);
    const int deg = static_cast<int>(rng.range(1, 4));
    const PadicPoly R = testing_support::random_int_poly(rng, q, deg, 40);
    const long L = rng.range(1, 4);
    const int k = static_cast<int>(rng.range(1, deg));
    const auto c = containment_check(R, L, k);
    INFO(R.to_string(), " L = ", L, " k = ", k);
    CHECK(c.holds);
    CHECK(std::isfinite(c.empirical_C));
  }
}

TEST_CASE("containment can fail when p <= k") {
  // Members are z = 2 mod 3. Q has no 3-adic zero there (its roots sit at
  // distance 3^(-5/3) over an extension), Q' has no zero in Z_3 and Q'' vanishes at 9/2.
  const PadicPoly Q = poly(3, {2, -3, -27, 2});
  const auto v = containment_check(Q, 1, 3);
  CHECK_FALSE(v.holds);
  CHECK(v.failures == v.set.members.size());
  CHECK(v.set.measure == frac(1, 3));
}

TEST_CASE("scaled phrasing") {
  Rng rng(85);
  for (int it = 0; it < 40; ++it) {
    const Prime q(std::vector<long>{3, 5, 7}[rng.below(3)]);
    const int deg = static_cast<int>(rng.range(2, 4));
    const PadicPoly P = testing_support::random_int_poly(rng, q, deg, 40).scaled(p_power(q, -rng.range(0, 2)));
    const long n = rng.range(-2, 1);
    const long m = n - rng.range(1, 2);
    const int k = static_cast<int>(rng.range(1, deg));
    const auto direct = scaled_sublevel_set(P, m, n, k);
    const PadicPoly Q = P.scaled(p_power(q, n));
    const auto via = sublevel_set(Q, n - m, k);
    CHECK(direct.measure == via.measure);
    const long K = std::max(direct.modulus, via.modulus);
    const Integer M = pow(q, static_cast<unsigned long>(K));
    for (int r = 0; r < 30; ++r) {
      const Integer z = rng.range(0, 1000000) % M;
      const Integer a = z % pow(q, static_cast<unsigned long>(direct.modulus));
      const Integer b = z % pow(q, static_cast<unsigned long>(via.modulus));
      CHECK(std::binary_search(direct.members.begin(), direct.members.end(), a) ==
            std::binary_search(via.members.begin(), via.members.end(), b));
    }
    const auto c = scaled_containment_check(P, m, n, k);
    REQUIRE(c.has_value());
    CHECK(c->holds);
  }
  CHECK_FALSE(scaled_containment_check(poly(5, {0, 0, 1}), 0, 0, 1).has_value());
}
