#include "padicsum/corpus.hpp"

#include <algorithm>

#include "padicsum/error.hpp"

namespace padicsum {

std::uint64_t CorpusRng::below(std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do v = gen_();
  while (v >= limit);
  return v % n;
}

long CorpusRng::range(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

long CorpusRng::unit(long p, int k) {
  long M = 1;
  for (int i = 0; i < k; ++i) M *= p;
  long v;
  do v = range(1, M - 1);
  while (v % p == 0);
  return v;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Dense: return "dense";
    case Family::Split: return "split";
    case Family::Parametric: return "parametric";
  }
  return "?";
}

std::pair<PadicPoly, RootDatum> integrate_split(Prime p, const Integer& a, const std::vector<Integer>& roots,
                                                const std::vector<int>& mult) {
  PadicPoly g(p, {Rational(1)});
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (int k = 0; k < mult[i]; ++k) g = g * PadicPoly(p, {Rational(-roots[i]), Rational(1)});
  Integer D = 1;
  for (int k = 0; k <= g.degree(); ++k) D = lcm(D, Integer(k + 1));
  if (D % static_cast<unsigned long>(p.value()) == 0)
    throw PreconditionError("p divides the integration denominator; need p > deg f");
  std::vector<Rational> c(g.degree() + 2);
  c[0] = 0;
  for (int k = 0; k <= g.degree(); ++k) {
    c[k + 1] = g.coeff(k) * a * D / (k + 1);
    c[k + 1].canonicalize();
  }
  std::vector<Rational> rs(roots.begin(), roots.end());
  return {PadicPoly(p, c), RootDatum::from_roots(p, Rational(a * D), rs, mult)};
}

PadicPoly dense_member(CorpusRng& rng, Prime p, int d, unsigned m) {
  const long pv = static_cast<long>(p.value());
  std::vector<Rational> c(d + 1);
  for (int i = 1; i <= d; ++i) {
    const long k = rng.range(0, static_cast<long>(m));
    c[i] = Rational(rng.range(-(pv * pv), pv * pv)) * Rational(pow(p, static_cast<unsigned long>(k)));
  }
  c[0] = rng.range(-pv, pv);
  while (c[d] == 0)
    c[d] = Rational(rng.unit(pv)) * Rational(pow(p, static_cast<unsigned long>(rng.range(0, static_cast<long>(m)))));
  return PadicPoly(p, c);
}

std::pair<PadicPoly, RootDatum> split_member(CorpusRng& rng, Prime p, int d, unsigned m) {
  const long pv = static_cast<long>(p.value());
  // Random composition of d - 1 into multiplicities.
  std::vector<int> mult;
  int left = d - 1;
  while (left > 0) {
    const int e = static_cast<int>(rng.range(1, left));
    mult.push_back(e);
    left -= e;
  }
  std::vector<Integer> roots;
  const Integer base = rng.range(0, pv - 1);
  while (roots.size() < mult.size()) {
    // Offsets at spacing p^-s from the base root or from the previous one.
    const long s = rng.range(0, static_cast<long>(m) + 1);
    const Integer anchor = roots.empty() || rng.below(2) == 0 ? base : roots.back();
    Integer r = anchor + Integer(rng.unit(pv)) * pow(p, static_cast<unsigned long>(s));
    if (rng.below(4) == 0) r = -r;
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  const Integer a = Integer(rng.unit(pv)) * pow(p, static_cast<unsigned long>(rng.range(0, 1)));
  return integrate_split(p, a, roots, mult);
}

namespace {

// f' = (x - n1)^f0 (x - n2)^e (x - n3)^e, |n1 - n2| = |n1 - n3| = p^-s, |n2 - n3| = p^-t.
CorpusMember three_root(CorpusRng& rng, Prime p, int d, unsigned m) {
  CorpusMember out;
  const int e = static_cast<int>(rng.range(1, std::max(1, (d - 2) / 2)));
  const int f0 = d - 1 - 2 * e;
  const long s = rng.range(0, 1);
  const long t = rng.range(s + 1, s + 3);
  const long pv = static_cast<long>(p.value());
  const Integer n1 = 0;
  const Integer n2 = pow(p, static_cast<unsigned long>(s)) * rng.unit(pv);
  const Integer n3 = n2 + pow(p, static_cast<unsigned long>(t)) * rng.unit(pv);
  auto [f, datum] = integrate_split(p, Integer(1), {n1, n2, n3}, {f0, e, e});
  out.f = std::move(f);
  out.roots = std::move(datum);
  out.m = m;
  return out;
}

// p^-(3r-2) t^3 + b0 p^-r t = p^-m (t^3 + b0 p^(2r-2) t) with m = 3r - 2.
CorpusMember cubic(Prime p, long r, long b0) {
  CorpusMember out;
  out.m = static_cast<unsigned>(3 * r - 2);
  out.f = PadicPoly(p, {Rational(0), Rational(b0) * Rational(pow(p, static_cast<unsigned long>(2 * r - 2))),
                        Rational(0), Rational(1)});
  return out;
}

unsigned max_m_for(Prime p, unsigned want, std::uint64_t max_pm) {
  unsigned m = 0;
  std::uint64_t pm = 1;
  while (m < want && pm * p.value() <= max_pm) {
    pm *= p.value();
    ++m;
  }
  return m;
}

}  // namespace

std::vector<CorpusMember> generate_corpus(const CorpusSpec& spec) {
  if (spec.size > 0 && (spec.primes.empty() || spec.families.empty()))
    throw PreconditionError("corpus needs at least one prime and one family");
  CorpusRng rng(spec.seed);
  std::vector<CorpusMember> out;
  std::size_t attempts = 0;
  while (out.size() < spec.size) {
    if (++attempts > 100 * spec.size + 1000) throw PreconditionError("corpus spec admits no members");
    const Family fam = spec.families[out.size() % spec.families.size()];
    const int d = static_cast<int>(rng.range(spec.min_degree, spec.max_degree));
    std::vector<long> allowed;
    for (long p : spec.primes)
      if (!spec.require_p_above_degree || p > d) allowed.push_back(p);
    if (allowed.empty()) continue;
    const Prime p(allowed[rng.below(allowed.size())]);
    const unsigned cap = max_m_for(p, spec.max_m, spec.max_pm);
    if (cap < spec.min_m) continue;
    const unsigned m = static_cast<unsigned>(rng.range(spec.min_m, cap));
    CorpusMember member;
    member.family = fam;
    member.m = m;
    member.f = PadicPoly(p);
    switch (fam) {
      case Family::Dense:
        member.f = dense_member(rng, p, d, m);
        break;
      case Family::Split: {
        if (d < 2 || p.value() <= static_cast<unsigned long>(d)) continue;
        auto [f, roots] = split_member(rng, p, d, m);
        member.f = std::move(f);
        member.roots = std::move(roots);
        break;
      }
      case Family::Parametric: {
        if (p.value() <= static_cast<unsigned long>(d)) continue;
        if (d >= 4) {
          member = three_root(rng, p, d, m);
        } else if (d == 3) {
          const long r = rng.range(1, 2);
          if (static_cast<unsigned>(3 * r - 2) > cap) continue;
          member = cubic(p, r, rng.unit(static_cast<long>(p.value())));
        } else if (d == 2) {
          // b z^2 + e z with |b| = p^-k.
          const long k = rng.range(0, static_cast<long>(m));
          const long pv = static_cast<long>(p.value());
          member.f = PadicPoly(p, {Rational(0), Rational(rng.range(-pv * pv, pv * pv)),
                                   Rational(rng.unit(pv)) * Rational(pow(p, static_cast<unsigned long>(k)))});
        } else {
          continue;
        }
        member.family = fam;
        break;
      }
    }
    member.index = out.size();
    out.push_back(std::move(member));
  }
  return out;
}

}  // namespace padicsum
