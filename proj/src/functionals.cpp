#include "padicsum/functionals.hpp"

#include <algorithm>

#include "padicsum/error.hpp"

namespace padicsum {

FunctionalValue functional_from_derivatives(const std::vector<Rational>& dd, Prime p, Functional f) {
  FunctionalValue out;
  for (std::size_t k = min_index(f); k < dd.size(); ++k) {
    const Magnitude m = Magnitude::of(dd[k], p).root(static_cast<long long>(k));
    if (m > out.value) {
      out.value = m;
      out.achieving_k = static_cast<int>(k);
    }
  }
  return out;
}

FunctionalValue functional_point(const PadicPoly& P, const Rational& x, Functional f) {
  if (x.get_den() != 1 && ord_p(x, P.prime()).value() < 0)
    throw PreconditionError("point " + to_string(x) + " is not in Z_p");
  auto out = functional_from_derivatives(P.divided_derivatives(x), P.prime(), f);
  out.witness = x;
  return out;
}

FunctionalValue h_point(const PadicPoly& P, const Rational& x) {
  return functional_point(P, x, Functional::H);
}

FunctionalValue j_point(const PadicPoly& P, const Rational& x) {
  return functional_point(P, x, Functional::J);
}

Magnitude functional_ceiling(const PadicPoly& P, Functional f) {
  const auto& c = P.coeffs();
  const Prime p = P.prime();
  Magnitude tail = Magnitude::zero();
  Magnitude out = Magnitude::zero();
  for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(min_index(f));) {
    tail = max(tail, Magnitude::of(c[k], p));
    out = max(out, tail.root(static_cast<long long>(k)));
  }
  return out;
}

long certified_modulus(const PadicPoly& P, Functional f) {
  const Magnitude ceil_value = functional_ceiling(P, f);
  if (ceil_value.is_zero()) return 0;
  return std::max(0LL, ceil(ceil_value.exponent()));
}

bool certifies_constant(const Magnitude& value, long j) { return value <= Magnitude::power(j); }

Magnitude ball_lower_bound(const std::vector<Rational>& dd, Prime p, long j, Functional f) {
  const std::size_t n = dd.size();
  std::vector<Magnitude> abs(n);
  for (std::size_t k = 0; k < n; ++k) abs[k] = Magnitude::of(dd[k], p);
  Magnitude out = Magnitude::zero();
  for (std::size_t k = min_index(f); k < n; ++k) {
    if (abs[k].is_zero()) continue;
    bool strict = true;
    for (std::size_t l = k + 1; l < n && strict; ++l)
      if (!(abs[k] > abs[l] * Magnitude::power(-j * static_cast<long long>(l - k)))) strict = false;
    if (strict) out = max(out, abs[k].root(static_cast<long long>(k)));
  }
  return out;
}

Magnitude ball_upper_bound(const std::vector<Rational>& dd, Prime p, long j, Functional f) {
  const std::size_t n = dd.size();
  std::vector<Magnitude> abs(n);
  for (std::size_t k = 0; k < n; ++k) abs[k] = Magnitude::of(dd[k], p);
  Magnitude out = Magnitude::zero();
  for (std::size_t k = min_index(f); k < n; ++k) {
    Magnitude bound = Magnitude::zero();
    for (std::size_t l = k; l < n; ++l)
      bound = max(bound, abs[l] * Magnitude::power(-j * static_cast<long long>(l - k)));
    out = max(out, bound.root(static_cast<long long>(k)));
  }
  return out;
}

namespace {

struct InfimumState {
  const PadicPoly& P;
  Functional f;
  Integer p;
  std::optional<BallCertificate> best_leaf;
  std::optional<Magnitude> best_point;
  std::size_t visited = 0;
};

void infimum_rec(InfimumState& s, const Integer& t, long j, const Integer& step) {
  ++s.visited;
  const Rational center(t);
  const auto dd = s.P.divided_derivatives(center);
  const auto here = functional_from_derivatives(dd, s.P.prime(), s.f);
  if (certifies_constant(here.value, j)) {
    if (!s.best_leaf || here.value < s.best_leaf->value)
      s.best_leaf = BallCertificate{center, j, here.value, here.achieving_k};
    return;
  }
  if (!s.best_point || here.value < *s.best_point) s.best_point = here.value;
  const Magnitude lower = ball_lower_bound(dd, s.P.prime(), j, s.f);
  if (s.best_leaf && lower >= s.best_leaf->value) return;
  if (s.best_point && lower > *s.best_point) return;
  const Integer next_step = step * s.p;
  for (unsigned long a = 0; a < s.P.prime().value(); ++a) infimum_rec(s, t + step * a, j + 1, next_step);
}

}  // namespace

InfimumSearch functional_infimum(const PadicPoly& P, Functional f) {
  InfimumState s{P, f, Integer(P.prime().value()), std::nullopt, std::nullopt, 0};
  infimum_rec(s, Integer(0), 0, Integer(1));
  InfimumSearch out;
  out.witness = *s.best_leaf;
  out.value.value = out.witness.value;
  out.value.achieving_k = out.witness.dominating_k;
  out.value.witness = out.witness.center;
  out.value.radius_exponent = out.witness.radius_exponent;
  out.certified_modulus = certified_modulus(P, f);
  out.balls_visited = s.visited;
  if (out.witness.radius_exponent > out.certified_modulus)
    throw InternalError("infimum search descended below the certified modulus");
  return out;
}

FunctionalValue h_inf(const PadicPoly& P) { return functional_infimum(P, Functional::H).value; }
FunctionalValue j_inf(const PadicPoly& P) { return functional_infimum(P, Functional::J).value; }

namespace {

void region_rec(const PadicPoly& P, Functional f, const Magnitude& threshold, const Integer& p,
                const Integer& t, long j, const Integer& step, RegionSearch& out) {
  ++out.balls_visited;
  const Rational center(t);
  const auto dd = P.divided_derivatives(center);
  const auto here = functional_from_derivatives(dd, P.prime(), f);
  if (certifies_constant(here.value, j)) {
    if (here.value >= threshold) out.balls.push_back({center, j, here.value, here.achieving_k});
    return;
  }
  if (ball_upper_bound(dd, P.prime(), j, f) < threshold) return;
  const Integer next_step = step * p;
  for (unsigned long a = 0; a < P.prime().value(); ++a)
    region_rec(P, f, threshold, p, t + step * a, j + 1, next_step, out);
}

}  // namespace

RegionSearch functional_region(const PadicPoly& P, const Magnitude& threshold, Functional f) {
  RegionSearch out;
  region_rec(P, f, threshold, Integer(P.prime().value()), Integer(0), 0, Integer(1), out);
  return out;
}

std::vector<BallCertificate> h_inf_region(const PadicPoly& P, const Magnitude& threshold) {
  return functional_region(P, threshold, Functional::H).balls;
}

Rational measure(const std::vector<BallCertificate>& balls, Prime p) {
  Rational total = 0;
  for (const auto& b : balls) total += Rational(Integer(1), pow(p, static_cast<unsigned long>(b.radius_exponent)));
  return total;
}

MultiFunctional::MultiFunctional(const MultiPadicPoly& P, Functional f)
    : p_(P.prime()), c_(P.denominator_exponent()) {
  const Rational scale(pow(p_, c_));
  const auto to_terms = [&](const MultiPadicPoly& Q) {
    std::vector<Term> out;
    for (const auto& [e, c] : Q.terms()) {
      const Rational v = c * scale;
      out.push_back({e, v.get_num()});
    }
    return out;
  };
  scaled_ = to_terms(P);
  const int d = P.degree();
  for (const auto& alpha : multi_indices_up_to(P.num_vars(), std::max(d, 0))) {
    const int k = total_degree(alpha);
    if (k < min_index(f)) continue;
    auto terms = to_terms(P.partial_divided(alpha));
    if (!terms.empty()) partials_.emplace_back(k, std::move(terms));
  }
  // Ceiling: max_k (max_{|beta| >= k} |c_beta|)^(1/k).
  Magnitude ceiling = Magnitude::zero();
  for (int k = std::max(d, 0); k >= min_index(f); --k) {
    Magnitude tail = Magnitude::zero();
    for (const auto& [e, c] : P.terms())
      if (total_degree(e) >= k) tail = max(tail, Magnitude::of(c, p_));
    ceiling = max(ceiling, tail.root(k));
  }
  modulus_ = ceiling.is_zero() ? 0 : std::max(0LL, ceil(ceiling.exponent()));
}

Integer MultiFunctional::eval(const std::vector<Term>& terms, const std::vector<Integer>& z) {
  Integer total = 0;
  Integer mono;
  for (const auto& t : terms) {
    mono = t.c;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (int r = 0; r < t.e[i]; ++r) mono *= z[i];
    total += mono;
  }
  return total;
}

Magnitude MultiFunctional::at(const std::vector<Integer>& z) const {
  Magnitude out = Magnitude::zero();
  const Magnitude unscale = Magnitude::power(static_cast<long long>(c_));
  for (const auto& [k, terms] : partials_) {
    const Integer v = eval(terms, z);
    if (v == 0) continue;
    out = max(out, (Magnitude::of(v, p_) * unscale).root(k));
  }
  return out;
}

Integer MultiFunctional::scaled_value(const std::vector<Integer>& z) const {
  Integer v = eval(scaled_, z);
  const Integer M = pow(p_, c_);
  v %= M;
  if (v < 0) v += M;
  return v;
}

}  // namespace padicsum
