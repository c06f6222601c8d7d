#include "padicsum/hensel.hpp"

#include <algorithm>

#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"

namespace padicsum {

HenselCertificate check_hypotheses(const PadicPoly& phi, const Rational& t0, int L) {
  const Prime p = phi.prime();
  if (L < 1) throw PreconditionError("Hensel order L must be positive");
  if (t0.get_den() != 1 && ord_p(t0, p).value() < 0)
    throw PreconditionError("t0 = " + to_string(t0) + " is not in Z_p");
  const auto dd = phi.divided_derivatives(t0);
  for (int k = 1; k <= L; ++k)
    if (k >= static_cast<int>(dd.size()) || dd[k] == 0)
      throw PreconditionError("phi^(" + std::to_string(k) + ")(t0) vanishes");

  HenselCertificate c;
  c.L = L;
  c.t0 = t0;
  c.lambda = phi.max_coeff_abs();
  c.lambda_plus = max(c.lambda, Magnitude());
  const Magnitude value = Magnitude::of(dd[0], p);
  const Magnitude slope = Magnitude::of(dd[1], p);
  c.step_bound = value / slope;
  c.delta = c.step_bound / Magnitude::of(dd[L], p);
  for (int k = 1; k <= L - 1; ++k)
    c.delta_k.push_back(Magnitude::of(dd[k + 1], p) / Magnitude::of(dd[k], p) * c.step_bound);

  const Magnitude one;
  const Magnitude lp_delta = c.lambda_plus * c.delta;
  if (L == 1) {
    c.rate = lp_delta;
    if (!(lp_delta < one)) c.failing_condition = "lambda_+ * delta < 1";
  } else {
    c.rate = c.delta_k[0];
    if (!(lp_delta <= one)) c.failing_condition = "lambda_+ * delta <= 1";
    else if (!(c.delta_k[0] < one)) c.failing_condition = "delta_1 < 1";
    else
      for (int k = 2; k <= L - 1; ++k)
        if (!(c.delta_k[k - 1] <= one)) {
          c.failing_condition = "delta_" + std::to_string(k) + " <= 1";
          break;
        }
  }
  c.hypotheses_met = c.failing_condition.empty();
  return c;
}

namespace {

// rate^(2^(n-1) - 1) for an integral-exponent rate <= 1.
Magnitude decay(const Magnitude& rate, int n) {
  if (n <= 1) return Magnitude();
  if (rate.is_zero()) return Magnitude::zero();
  const long long e = (n - 1 >= 62) ? (1LL << 62) - 1 : (1LL << (n - 1)) - 1;
  if (rate.exponent().numerator() == 0) return Magnitude();
  return rate.pow(e);
}

}  // namespace

LiftedRoot lift_root(const PadicPoly& phi, const Rational& t0, int L, long N, bool strict) {
  const Prime p = phi.prime();
  const HenselCertificate cert = check_hypotheses(phi, t0, L);
  if (!cert.hypotheses_met)
    throw PreconditionError("Hensel hypotheses not met: " + cert.failing_condition);

  const auto dd0 = phi.divided_derivatives(t0);
  std::vector<Magnitude> reference(L + 1);
  for (int k = 1; k <= L; ++k) reference[k] = Magnitude::of(dd0[k], p);
  const Magnitude start_value = Magnitude::of(dd0[0], p);
  const Magnitude target = Magnitude::power(-N);

  // Iteration count after which (2)_n forces |phi| <= p^-N.
  int max_iterations = 1;
  if (!start_value.is_zero() && !cert.rate.is_zero()) {
    const Exponent need = start_value.exponent() + N;  // need rate^(2^(n-1)-1) <= p^-(need)
    const Exponent per = -cert.rate.exponent();        // > 0
    while (per * Exponent((1LL << (max_iterations - 1)) - 1) < need && max_iterations < 60)
      ++max_iterations;
  }

  LiftedRoot out;
  const auto violated = [&](const std::string& claim) {
    if (strict) throw InternalError("Hensel claim " + claim + " failed");
    out.claim_failures.push_back(claim);
  };
  Rational t = t0;
  for (int n = 1;; ++n) {
    const auto dd = phi.divided_derivatives(t);
    const Magnitude value = Magnitude::of(dd[0], p);
    const Magnitude shrink = decay(cert.rate, n);
    if (!(value <= start_value * shrink)) violated("(2)_" + std::to_string(n));
    for (int k = 1; k <= L; ++k)
      if (!(Magnitude::of(dd[k], p) == reference[k]))
        violated("(3)_" + std::to_string(n) + " at k = " + std::to_string(k));
    out.claims_checked = n;
    if (value <= target) break;
    if (n > max_iterations)
      throw InternalError("Newton iteration did not reach precision " + std::to_string(N) +
                          " within the certified " + std::to_string(max_iterations) + " steps");
    Rational next = t - dd[0] / dd[1];
    next.canonicalize();
    if (!(Magnitude::of(next - t, p) <= cert.step_bound * shrink)) violated("(1)_" + std::to_string(n));
    t = std::move(next);
    ++out.iterations;
  }
  out.t = t;
  const Magnitude final_value = Magnitude::of(phi(t), p);
  out.precision = final_value.is_zero() ? std::max<long>(N, 0) : -floor(final_value.exponent());
  out.distance = Magnitude::of(t - t0, p);
  if (!(out.distance <= cert.step_bound))
    throw InternalError("lifted root violates |t - t0| <= |phi(t0)/phi'(t0)|");
  return out;
}

NewtonPolygon newton_polygon(const PadicPoly& g) {
  if (g.is_zero()) throw PreconditionError("Newton polygon of the zero polynomial");
  const Prime p = g.prime();
  NewtonPolygon out;
  const auto& c = g.coeffs();
  int low = 0;
  while (c[low] == 0) ++low;
  out.zero_roots = low;
  for (int i = low; i <= g.degree(); ++i)
    if (c[i] != 0) out.points.emplace_back(i - low, ord_p(c[i], p).value());

  // Lower convex hull, monotone chain over increasing i.
  for (const auto& pt : out.points) {
    while (out.vertices.size() >= 2) {
      const auto& a = out.vertices[out.vertices.size() - 2];
      const auto& b = out.vertices.back();
      // Remove b if it lies on or above segment a -> pt.
      const __int128 cross = static_cast<__int128>(b.first - a.first) * (pt.second - a.second) -
                             static_cast<__int128>(b.second - a.second) * (pt.first - a.first);
      if (cross <= 0) out.vertices.pop_back();
      else break;
    }
    out.vertices.push_back(pt);
  }
  for (std::size_t s = 1; s < out.vertices.size(); ++s) {
    const auto& a = out.vertices[s - 1];
    const auto& b = out.vertices[s];
    PolygonSegment seg{Exponent(b.second - a.second, b.first - a.first), b.first - a.first};
    out.segments.push_back(seg);
    out.root_valuations.emplace_back(-seg.slope, seg.length);
  }
  return out;
}

namespace {

struct ZeroSearch {
  const PadicPoly& R;
  Prime p;
  Integer prime;
  long N;
  int order;
  std::vector<DerivativeZero> found;
};

void zeros_rec(ZeroSearch& s, const Integer& t, long depth, const Integer& step) {
  const Rational center(t);
  const auto dd = s.R.divided_derivatives(center);
  const std::size_t n = dd.size();
  std::vector<Magnitude> abs(n);
  for (std::size_t k = 0; k < n; ++k) abs[k] = Magnitude::of(dd[k], s.p);
  const auto radius_pow = [&](std::size_t l) { return Magnitude::power(-depth * static_cast<long long>(l)); };

  // |R| is constant and nonzero on the ball.
  Magnitude tail = Magnitude::zero();
  for (std::size_t l = 1; l < n; ++l) tail = max(tail, abs[l] * radius_pow(l));
  if (abs[0] > tail) return;

  // R' dominates: R is injective on the ball, so it has at most one zero there,
  // and one exactly when |R(t)| <= |R'(t)| p^-depth.
  bool injective = n >= 2 && !abs[1].is_zero();
  for (std::size_t l = 2; l < n && injective; ++l)
    if (!(abs[1] > abs[l] * Magnitude::power(-depth * static_cast<long long>(l - 1)))) injective = false;
  if (injective) {
    if (abs[0] > abs[1] * radius_pow(1)) return;
    if (dd[0] == 0) {
      s.found.push_back({s.order, center, Magnitude::zero(), s.N, true, true});
      return;
    }
    const HenselCertificate cert = check_hypotheses(s.R, center, 1);
    if (cert.hypotheses_met) {
      // |root - t| = |R(t)/R'(t)| on an injective ball.
      const long slope_ord = -floor(abs[1].exponent());
      const LiftedRoot root = lift_root(s.R, center, 1, s.N + slope_ord);
      const Magnitude residual = Magnitude::of(s.R(root.t), s.p);
      DerivativeZero z{s.order, root.t, residual / abs[1], s.N, residual.is_zero(), true};
      s.found.push_back(z);
      return;
    }
  }
  if (depth >= s.N) {
    // Possibly several zeros share the box, even when the centre is one of them.
    s.found.push_back({s.order, center, Magnitude::power(-depth), depth, dd[0] == 0, false});
    return;
  }
  const Integer next = step * s.prime;
  for (unsigned long a = 0; a < s.p.value(); ++a) zeros_rec(s, t + step * a, depth + 1, next);
}

}  // namespace

std::vector<DerivativeZero> zeros_in_Zp(const PadicPoly& R, long N, int order) {
  if (R.degree() < 1) return {};
  ZeroSearch s{R, R.prime(), Integer(R.prime().value()), N, order, {}};
  zeros_rec(s, Integer(0), 0, Integer(1));
  return s.found;
}

std::vector<DerivativeZero> derivative_zeros(const PadicPoly& Q, long N) {
  std::vector<DerivativeZero> out;
  for (int j = 0; j <= Q.degree(); ++j) {
    auto zs = zeros_in_Zp(Q.divided_derivative(j), N, j);
    out.insert(out.end(), zs.begin(), zs.end());
  }
  return out;
}

}  // namespace padicsum
