#include "padicsum/congruence.hpp"

#include <algorithm>

#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"
#include "padicsum/multivar.hpp"

namespace padicsum {

int compare_real(const Rational& r, const Magnitude& m, Prime p) {
  if (m.is_zero()) return sgn(r);
  if (r <= 0) return -1;
  // r vs p^(a/b): r^b p^max(0,-a) vs p^max(0,a).
  const long long a = m.exponent().numerator();
  const long long b = m.exponent().denominator();
  Rational lhs = 1;
  for (long long i = 0; i < b; ++i) lhs *= r;
  lhs *= Rational(pow(p, static_cast<unsigned long>(std::max(0LL, -a))));
  const Rational rhs(pow(p, static_cast<unsigned long>(std::max(0LL, a))));
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

namespace {

MultiPadicPoly as_multi(const PadicPoly& Q) {
  MultiPadicPoly out(Q.prime(), 1);
  for (int i = 0; i <= Q.degree(); ++i)
    if (Q.coeff(i) != 0) out.add_term({i}, Q.coeff(i));
  return out;
}

PadicPoly as_uni(const MultiPadicPoly& Q) {
  std::vector<Rational> c(std::max(Q.degree(), 0) + 1, Rational(0));
  for (const auto& [e, v] : Q.terms()) c[e[0]] = v;
  return PadicPoly(Q.prime(), c);
}

std::uint64_t checked_points(Prime p, long exponent, std::uint64_t budget, const std::string& what) {
  const Integer pts = pow(p, static_cast<unsigned long>(exponent));
  const bool fits = pts.fits_ulong_p();
  if (!fits || pts.get_ui() > budget) throw BudgetExceeded(what, fits ? pts.get_ui() : ~0ULL, budget);
  return pts.get_ui();
}

Magnitude h_alpha(const MultiPadicPoly& Q, long alpha, std::uint64_t budget) {
  const Rational scale = 1 / Rational(pow(Q.prime(), static_cast<unsigned long>(alpha)));
  if (Q.num_vars() == 1) return h_inf(as_uni(Q).scaled(scale)).value;
  return h_inf_multi(Q.scaled(scale), budget).value;
}

}  // namespace

std::vector<std::uint64_t> residue_histogram(const MultiPadicPoly& Q, long alpha, std::uint64_t budget) {
  if (alpha < 1) throw PreconditionError("congruence modulus exponent must be positive");
  for (const auto& [e, c] : Q.terms())
    if (c.get_den() != 1) throw PreconditionError("congruence counting needs integer coefficients");
  const int n = Q.num_vars();
  checked_points(Q.prime(), alpha * n, budget, "congruence enumeration mod p^" + std::to_string(alpha));
  const std::uint64_t M = pow(Q.prime(), static_cast<unsigned long>(alpha)).get_ui();
  struct Term {
    MultiIndex e;
    std::uint64_t c;
  };
  std::vector<Term> terms;
  for (const auto& [e, c] : Q.terms()) {
    Integer r = c.get_num() % M;
    if (r < 0) r += M;
    terms.push_back({e, r.get_ui()});
  }
  const auto mul = [M](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % M);
  };
  std::vector<std::uint64_t> counts(M, 0);
  std::vector<std::uint64_t> x(n, 0);
  while (true) {
    std::uint64_t v = 0;
    for (const auto& t : terms) {
      std::uint64_t w = t.c;
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < t.e[i]; ++r) w = mul(w, x[i]);
      v = (v + w) % M;
    }
    ++counts[v];
    int i = n - 1;
    while (i >= 0 && x[i] + 1 == M) x[i--] = 0;
    if (i < 0) break;
    ++x[i];
  }
  return counts;
}

CongruenceCount count_solutions(const MultiPadicPoly& Q, const Integer& a, long alpha, std::uint64_t budget) {
  const auto counts = residue_histogram(Q, alpha, budget);
  const Integer M = pow(Q.prime(), static_cast<unsigned long>(alpha));
  Integer r = a % M;
  if (r < 0) r += M;
  CongruenceCount out;
  out.p = Q.prime();
  out.n = Q.num_vars();
  out.alpha = alpha;
  out.a = r;
  out.N = counts[r.get_ui()];
  out.normalized = Rational(Integer(static_cast<unsigned long>(out.N)),
                            pow(Q.prime(), static_cast<unsigned long>(alpha * out.n)));
  out.normalized.canonicalize();
  out.H_alpha = h_alpha(Q, alpha, budget);
  return out;
}

CongruenceCount count_solutions(const PadicPoly& Q, const Integer& a, long alpha, std::uint64_t budget) {
  return count_solutions(as_multi(Q), a, alpha, budget);
}

CongruenceAudit congruence_audit(const MultiPadicPoly& Q, long alpha, std::uint64_t budget) {
  const auto counts = residue_histogram(Q, alpha, budget);
  CongruenceAudit out;
  out.p = Q.prime();
  out.n = Q.num_vars();
  out.alpha = alpha;
  const auto best = std::max_element(counts.begin(), counts.end());
  out.argmax_a = static_cast<unsigned long>(best - counts.begin());
  out.sup = Rational(Integer(static_cast<unsigned long>(*best)),
                     pow(Q.prime(), static_cast<unsigned long>(alpha * out.n)));
  out.sup.canonicalize();
  out.H_alpha = h_alpha(Q, alpha, budget);
  out.capped = out.H_alpha.is_zero() ? Magnitude() : min(Magnitude(), out.H_alpha.inverse());
  out.integral_valuation = out.H_alpha.has_integral_valuation();
  if (out.n == 1) {
    out.lower_holds = compare_real(out.sup, out.capped / Magnitude::power(1), out.p) > 0;
    if (out.integral_valuation) out.improved_holds = compare_real(out.sup, out.capped, out.p) >= 0;
  }
  out.upper_ratio = out.sup.get_d() / out.capped.to_double(out.p);
  return out;
}

CongruenceAudit congruence_audit(const PadicPoly& Q, long alpha, std::uint64_t budget) {
  return congruence_audit(as_multi(Q), alpha, budget);
}

nlohmann::json CongruenceAudit::to_json() const {
  nlohmann::json j{{"p", p.value()},
                   {"n", n},
                   {"alpha", alpha},
                   {"sup", to_string(sup)},
                   {"argmax_a", argmax_a.get_str()},
                   {"H_alpha", H_alpha.to_string()},
                   {"capped", capped.to_string()},
                   {"integral_valuation", integral_valuation},
                   {"upper_ratio", upper_ratio}};
  j["lower_holds"] = lower_holds ? nlohmann::json(*lower_holds) : nlohmann::json(nullptr);
  j["improved_holds"] = improved_holds ? nlohmann::json(*improved_holds) : nlohmann::json(nullptr);
  return j;
}

bool in_sublevel(const PadicPoly& P, const Rational& z, long m_exp, long n_exp, int k) {
  const auto dd = P.divided_derivatives(z);
  const Rational value = dd.empty() ? Rational(0) : dd[0];
  const Rational dk = static_cast<std::size_t>(k) < dd.size() ? dd[k] : Rational(0);
  return Magnitude::of(value, P.prime()) <= Magnitude::power(m_exp) &&
         Magnitude::of(dk, P.prime()) >= Magnitude::power(n_exp);
}

long sublevel_modulus(const PadicPoly& P, long m_exp, long n_exp) {
  const long c = static_cast<long>(P.denominator_exponent());
  return std::max({0L, c - m_exp, c - n_exp + 1});
}

SublevelSet scaled_sublevel_set(const PadicPoly& P, long m_exp, long n_exp, int k, std::uint64_t budget) {
  if (k < 1) throw PreconditionError("sublevel derivative index must be at least 1");
  SublevelSet out;
  out.p = P.prime();
  out.m_exp = m_exp;
  out.n_exp = n_exp;
  out.k = k;
  out.modulus = sublevel_modulus(P, m_exp, n_exp);
  const std::uint64_t N =
      checked_points(P.prime(), out.modulus, budget, "sublevel enumeration mod p^" + std::to_string(out.modulus));
  for (std::uint64_t z = 0; z < N; ++z) {
    const Integer zi(static_cast<unsigned long>(z));
    if (in_sublevel(P, Rational(zi), m_exp, n_exp, k)) out.members.push_back(zi);
  }
  out.measure = Rational(Integer(static_cast<unsigned long>(out.members.size())), Integer(static_cast<unsigned long>(N)));
  out.measure.canonicalize();
  return out;
}

SublevelSet sublevel_set(const PadicPoly& Q, long L, int k, std::uint64_t budget) {
  if (L < 1) throw PreconditionError("sublevel depth L must be positive");
  if (k > Q.degree()) throw PreconditionError("derivative index exceeds the degree");
  return scaled_sublevel_set(Q, -L, 0, k, budget);
}

nlohmann::json SublevelSet::to_json() const {
  nlohmann::json members_j = nlohmann::json::array();
  for (const auto& z : members) members_j.push_back(z.get_str());
  return {{"p", p.value()}, {"m", m_exp},        {"n", n_exp},
          {"k", k},         {"modulus", modulus}, {"measure", to_string(measure)},
          {"members", members_j}};
}

ContainmentVerdict containment_check(const PadicPoly& Q, long L, int k, std::uint64_t budget) {
  ContainmentVerdict out;
  out.set = sublevel_set(Q, L, k, budget);
  const Prime p = Q.prime();
  out.radius = Magnitude::power(-Exponent(L, k));
  // Each member residue is a ball of radius p^-modulus <= radius, so its
  // representative decides the whole ball.
  if (Magnitude::power(-out.set.modulus) > out.radius) throw InternalError("sublevel residues coarser than the radius");
  out.precision = out.set.modulus + 2;
  std::vector<DerivativeZero> zeros;
  for (const auto& z : derivative_zeros(Q, out.precision))
    if (z.order <= k) zeros.push_back(z);
  out.zero_count = zeros.size();

  bool first = true;
  for (const auto& member : out.set.members) {
    const Rational x(member);
    std::optional<Magnitude> best;
    const DerivativeZero* best_zero = nullptr;
    bool best_flagged = false;
    for (const auto& z : zeros) {
      const Magnitude gap = Magnitude::of(Rational(x - z.value), p);
      // An exact centre is itself a zero, resolved or not.
      const Magnitude d = z.exact ? gap : max(gap, z.error_radius);
      const bool flagged = !z.resolved && !z.exact;
      const bool better = !best || d < *best || (d == *best && best_flagged && !flagged);
      if (better) {
        best = d;
        best_zero = &z;
        best_flagged = flagged;
      }
    }
    const bool ok = best && *best <= out.radius;
    if (!ok) ++out.failures;
    else if (best_flagged) ++out.flagged;
    const Magnitude d = best ? *best : Magnitude::power(1);
    if (first || out.worst_distance < d) {
      out.worst_member = member;
      out.worst_distance = d;
      out.worst_zero = best_zero ? std::optional<DerivativeZero>(*best_zero) : std::nullopt;
      first = false;
    }
  }
  out.holds = out.failures == 0;
  out.empirical_C = out.set.measure.get_d() / out.radius.to_double(p);
  return out;
}

std::optional<ContainmentVerdict> scaled_containment_check(const PadicPoly& P, long m_exp, long n_exp, int k,
                                                           std::uint64_t budget) {
  const long L = n_exp - m_exp;
  if (L <= 0) return std::nullopt;
  const Rational scale = Rational(pow(P.prime(), static_cast<unsigned long>(std::max(0L, n_exp)))) /
                         Rational(pow(P.prime(), static_cast<unsigned long>(std::max(0L, -n_exp))));
  return containment_check(P.scaled(scale), L, k, budget);
}

nlohmann::json ContainmentVerdict::to_json() const {
  nlohmann::json j{{"L", -set.m_exp},
                   {"k", set.k},
                   {"radius", radius.to_string()},
                   {"holds", holds},
                   {"failures", failures},
                   {"flagged", flagged},
                   {"members", set.members.size()},
                   {"measure", to_string(set.measure)},
                   {"zeros", zero_count},
                   {"empirical_C", empirical_C}};
  if (worst_member) {
    j["worst_member"] = worst_member->get_str();
    j["worst_distance"] = worst_distance.to_string();
  }
  if (worst_zero) j["worst_zero"] = {{"order", worst_zero->order}, {"value", to_string(worst_zero->value)}};
  return j;
}

}  // namespace padicsum
