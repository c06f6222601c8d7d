#include "padicsum/expsum.hpp"

#include <cmath>
#include <istream>
#include <ostream>

extern "C" {
#include <quadmath.h>
}

#include "padicsum/error.hpp"

namespace padicsum {

Real Complex::abs() const { return hypotq(re, im); }

namespace {

const Real kTwoPi = 2 * M_PIq;
// Per-term rounding allowance for root-of-unity values and accumulation.
const double kTermError = std::ldexp(1.0, -110);

std::uint64_t checked_modulus(Prime p, unsigned long m, unsigned n, std::uint64_t budget,
                              const char* what) {
  const Integer M = pow(p, m);
  const Integer points = pow(p, m * n);
  if (!points.fits_ulong_p() || points.get_ui() > budget)
    throw BudgetExceeded(what, points.fits_ulong_p() ? points.get_ui() : ~0ULL, budget);
  return M.get_ui();
}

std::vector<std::uint64_t> coeffs_mod(const PadicPoly& f, std::uint64_t M) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const Rational& c = f.coeffs()[i];
    if (c.get_den() != 1)
      throw PreconditionError("coefficient of x^" + std::to_string(i) + " is not an integer");
    Integer r = c.get_num() % Integer(M);
    if (r < 0) r += M;
    out.push_back(r.get_ui());
  }
  return out;
}

std::uint64_t eval_mod(const std::vector<std::uint64_t>& c, std::uint64_t x, std::uint64_t M) {
  unsigned __int128 acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % M;
  return static_cast<std::uint64_t>(acc);
}

Real p_power_inv(Prime p, long j) { return powq(static_cast<Real>(p.value()), -static_cast<Real>(j)); }

}  // namespace

Complex root_of_unity(std::uint64_t t, std::uint64_t M) {
  t %= M;
  if (t == 0) return {1, 0};
  Real s, c;
  sincosq(kTwoPi * static_cast<Real>(t) / static_cast<Real>(M), &s, &c);
  return {c, s};
}

Complex character(const Rational& x, Prime p) {
  const Rational frac = fractional_part(x, p);
  if (!frac.get_den().fits_ulong_p())
    throw PreconditionError("character argument " + to_string(x) + " has too large a denominator");
  return root_of_unity(frac.get_num().get_ui(), frac.get_den().get_ui());
}

nlohmann::json to_json(const SumValue& s) {
  return nlohmann::json{{"re", s.re()}, {"im", s.im()}, {"abs", s.abs()}, {"err", s.err}};
}

void write_histogram(const SumValue& s, std::ostream& out) {
  if (!s.histogram) throw PreconditionError("sum carries no histogram");
  const auto put = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put(s.modulus);
  for (auto c : *s.histogram) put(c);
}

std::vector<std::uint64_t> read_histogram(std::istream& in, std::uint64_t& modulus) {
  const auto get = [&]() {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw ParseError("truncated histogram");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  };
  modulus = get();
  std::vector<std::uint64_t> counts(modulus);
  for (auto& c : counts) c = get();
  return counts;
}

SumValue sum_from_histogram(std::vector<std::uint64_t> counts, bool keep) {
  SumValue out;
  out.modulus = counts.size();
  std::uint64_t total = 0;
  std::size_t terms = 0;
  Complex acc;
  for (std::uint64_t t = 0; t < counts.size(); ++t) {
    if (counts[t] == 0) continue;
    total += counts[t];
    ++terms;
    acc += root_of_unity(t, out.modulus) * static_cast<Real>(counts[t]);
  }
  if (total == 0) throw PreconditionError("empty histogram");
  out.value = acc * (1 / static_cast<Real>(total));
  out.err = static_cast<double>(terms + 4) * kTermError;
  if (keep) out.histogram = std::move(counts);
  return out;
}

SumValue complete_sum(const PadicPoly& f, unsigned m, std::uint64_t budget, bool keep_histogram) {
  if (m < 1) throw PreconditionError("complete_sum needs m >= 1");
  const std::uint64_t M = checked_modulus(f.prime(), m, 1, budget, "complete sum");
  const auto c = coeffs_mod(f, M);
  std::vector<std::uint64_t> counts(M, 0);
  for (std::uint64_t x = 0; x < M; ++x) ++counts[eval_mod(c, x, M)];
  return sum_from_histogram(std::move(counts), keep_histogram);
}

Complex direct_sum(const PadicPoly& f, unsigned m, std::uint64_t budget) {
  const std::uint64_t M = checked_modulus(f.prime(), m, 1, budget, "direct sum");
  Complex acc;
  const Rational scale(Integer(1), Integer(M));
  for (std::uint64_t x = 0; x < M; ++x) acc += character(f(Rational(Integer(x))) * scale, f.prime());
  return acc * (1 / static_cast<Real>(M));
}

SumValue full_integral(const PadicPoly& P, std::uint64_t budget) {
  const unsigned long c = P.denominator_exponent();
  if (c == 0) {
    SumValue one;
    one.value = {1, 0};
    return one;
  }
  return complete_sum(P.scaled(Rational(pow(P.prime(), c))), static_cast<unsigned>(c), budget, false);
}

FiniteFieldSum finite_field_sum(const PadicPoly& Q) {
  const Prime p = Q.prime();
  const auto c = coeffs_mod(Q, p.value());
  int degree = -1;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) degree = static_cast<int>(i);
  FiniteFieldSum out;
  Complex acc;
  for (std::uint64_t x = 0; x < p.value(); ++x) acc += root_of_unity(eval_mod(c, x, p.value()), p.value());
  out.value.value = acc;
  out.value.modulus = p.value();
  out.value.err = static_cast<double>(p.value() + 4) * kTermError;
  if (degree >= 1 && p.value() > static_cast<unsigned long>(degree)) {
    out.weil_bound = (degree - 1) * std::sqrt(static_cast<double>(p.value()));
    out.weil_holds = out.value.abs() <= *out.weil_bound + 1e-9;
  }
  return out;
}

SumValue local_integral(const PadicPoly& P, const Magnitude& H) {
  SumValue out;
  const auto balls = h_inf_region(P, H);
  Complex acc;
  for (const auto& b : balls) acc += character(P(b.center), P.prime()) * p_power_inv(P.prime(), b.radius_exponent);
  out.value = acc;
  out.err = static_cast<double>(balls.size() + 4) * kTermError;
  return out;
}

namespace {

struct BaseCase {
  long j = 0;
  Rational center;
  std::vector<Integer> Q;
  Complex contribution;
  Rational z_star;
};

struct StructuredState {
  const PadicPoly& P;
  Prime p;
  Integer prime;
  const StructuredOptions& opt;
  StructuredResult& r;
  Complex acc;
  double err = 0;
  std::optional<BaseCase> main;
};

Magnitude abs_at(const std::vector<Rational>& dd, std::size_t k, Prime p) {
  return k < dd.size() ? Magnitude::of(dd[k], p) : Magnitude::zero();
}

// A critical point z with |P'(z)| = p^s, |P''(z)/2| = p^(2s-1) and
// |P^(k)(z)/k!| <= p^(ks-(k-1)), searched among the centres t + p^j x.
std::optional<Rational> find_critical(const StructuredState& s, const Integer& t, const Integer& step,
                                      long sexp) {
  const int d = s.P.degree();
  for (unsigned long x = 0; x < s.p.value(); ++x) {
    const Rational z(t + step * x);
    const auto dd = s.P.divided_derivatives(z);
    if (!(abs_at(dd, 1, s.p) == Magnitude::power(sexp))) continue;
    if (!(abs_at(dd, 2, s.p) == Magnitude::power(2 * sexp - 1))) continue;
    bool ok = true;
    for (int k = 1; k <= d && ok; ++k)
      if (!(abs_at(dd, k, s.p) <= Magnitude::power(k * sexp - (k - 1)))) ok = false;
    if (ok) return z;
  }
  return std::nullopt;
}

void structured_rec(StructuredState& s, const Integer& t, long j, const Integer& step) {
  StructuredResult& r = s.r;
  ++r.balls_visited;
  ++r.residues_visited;
  const Rational center(t);
  const auto dd = s.P.divided_derivatives(center);
  const Magnitude pj = Magnitude::power(j);
  const Real weight = p_power_inv(s.p, j);

  const Magnitude Jt = functional_from_derivatives(dd, s.p, Functional::J).value;
  if (Jt <= pj) {
    const Magnitude d1 = abs_at(dd, 1, s.p);
    // H is constant on the ball here.
    if (s.opt.threshold && max(d1, Jt) < *s.opt.threshold) return;
    if (d1 <= pj) {
      s.acc += character(dd.empty() ? Rational(0) : dd[0], s.p) * weight;
      s.err += kTermError;
      ++r.balls_constant;
    } else {
      ++r.balls_vanished;
    }
    return;
  }

  bool whole_ball = true;
  if (s.opt.threshold) {
    if (ball_upper_bound(dd, s.p, j, Functional::H) < *s.opt.threshold) return;
    whole_ball = ball_lower_bound(dd, s.p, j, Functional::H) >= *s.opt.threshold;
  }

  bool base = whole_ball;
  for (std::size_t k = 1; k < dd.size() && base; ++k)
    if (!(Magnitude::of(dd[k], s.p) * Magnitude::power(-j * static_cast<long long>(k)) <= Magnitude::power(1)))
      base = false;
  if (base) {
    // P(t + p^j x) = P(t) + Q(x)/p mod Z_p.
    std::vector<Rational> q(dd.size(), Rational(0));
    std::vector<Integer> Q(dd.size(), Integer(0));
    Rational scale = Rational(s.prime);
    const Rational pj_step(pow(s.p, static_cast<unsigned long>(j)));
    for (std::size_t k = 1; k < dd.size(); ++k) {
      scale *= pj_step;
      const Rational v = dd[k] * scale;
      Integer qk = v.get_num() % s.prime;
      if (qk < 0) qk += s.prime;
      Q[k] = qk;
      q[k] = Rational(qk);
    }
    const FiniteFieldSum ff = finite_field_sum(PadicPoly(s.p, q));
    const Complex contribution = character(dd[0], s.p) * ff.value.value * (weight / static_cast<Real>(s.p.value()));
    s.acc += contribution;
    s.err += ff.value.err * static_cast<double>(weight);
    ++r.base_cases;
    r.residues_visited += s.p.value();
    if (!s.main || j < s.main->j) {
      if (auto z = find_critical(s, t, step, j + 1)) s.main = BaseCase{j, center, Q, contribution, *z};
    }
    return;
  }

  if (j >= s.opt.max_depth) {
    // g(w) = P(t + p^j w) has H_g = p^-j H_P.
    const PadicPoly g = s.P.taylor_shift(center, j);
    const SumValue v = s.opt.threshold
                           ? local_integral(g, *s.opt.threshold * Magnitude::power(-j))
                           : full_integral(g, s.opt.budget);
    s.acc += v.value * weight;
    s.err += v.err * static_cast<double>(weight);
    ++r.fallbacks;
    r.residues_visited += pow(s.p, g.denominator_exponent()).get_ui();
    return;
  }

  const Integer next = step * s.prime;
  for (unsigned long a = 0; a < s.p.value(); ++a) structured_rec(s, t + step * a, j + 1, next);
}

}  // namespace

StructuredResult structured_eval(const PadicPoly& P, const StructuredOptions& opt) {
  StructuredResult r;
  r.p_exceeds_degree = P.prime().value() > static_cast<unsigned long>(std::max(P.degree(), 0));
  StructuredState s{P, P.prime(), Integer(P.prime().value()), opt, r, {}, 0, std::nullopt};
  structured_rec(s, Integer(0), 0, Integer(1));
  r.total.value = s.acc;
  r.total.err = s.err + 4 * kTermError;
  if (s.main) {
    r.epsilon = 1;
    r.s = s.main->j + 1;
    r.Q = s.main->Q;
    r.z_star = s.main->z_star;
    r.main_term = s.main->contribution;
  }
  r.residual = r.total.value - r.main_term;
  return r;
}

namespace {

MultiPadicPoly scaled_integer(const MultiPadicPoly& P, unsigned m) {
  if (P.denominator_exponent() > m)
    throw PreconditionError("denominators of P do not divide p^" + std::to_string(m));
  return P.scaled(Rational(pow(P.prime(), m)));
}

}  // namespace

SumValue multi_sum(const MultiPadicPoly& P, unsigned m, std::uint64_t budget) {
  const int n = P.num_vars();
  const std::uint64_t M = checked_modulus(P.prime(), m, static_cast<unsigned>(n), budget, "multivariate sum");
  const MultiPadicPoly F = scaled_integer(P, m);
  struct Term {
    MultiIndex e;
    std::uint64_t c;
  };
  std::vector<Term> terms;
  for (const auto& [e, c] : F.terms()) {
    Integer r = c.get_num() % Integer(M);
    if (r < 0) r += M;
    terms.push_back({e, r.get_ui()});
  }
  const int d = std::max(P.degree(), 0);
  // powers[v * (d+1) + e] = v^e mod M
  std::vector<std::uint64_t> powers(M * (d + 1));
  for (std::uint64_t v = 0; v < M; ++v) {
    unsigned __int128 acc = 1 % M;
    for (int e = 0; e <= d; ++e) {
      powers[v * (d + 1) + e] = static_cast<std::uint64_t>(acc);
      acc = acc * v % M;
    }
  }
  std::vector<std::uint64_t> counts(M, 0);
  std::vector<std::uint64_t> z(n, 0);
  while (true) {
    unsigned __int128 value = 0;
    for (const auto& t : terms) {
      unsigned __int128 mono = t.c;
      for (int i = 0; i < n; ++i) mono = mono * powers[z[i] * (d + 1) + t.e[i]] % M;
      value += mono;
    }
    ++counts[static_cast<std::uint64_t>(value % M)];
    int i = 0;
    while (i < n && ++z[i] == M) z[i++] = 0;
    if (i == n) break;
  }
  return sum_from_histogram(std::move(counts));
}

Complex multi_sum_direct(const MultiPadicPoly& P, unsigned m, std::uint64_t budget) {
  const int n = P.num_vars();
  const std::uint64_t M = checked_modulus(P.prime(), m, static_cast<unsigned>(n), budget, "multivariate sum");
  Complex acc;
  std::vector<std::uint64_t> z(n, 0);
  std::vector<Rational> zr(n);
  std::uint64_t points = 0;
  while (true) {
    for (int i = 0; i < n; ++i) zr[i] = Rational(Integer(z[i]));
    acc += character(P(zr), P.prime());
    ++points;
    int i = n - 1;
    while (i >= 0 && ++z[i] == M) z[i--] = 0;
    if (i < 0) break;
  }
  return acc * (1 / static_cast<Real>(points));
}

SumValue multi_local_integral(const MultiPadicPoly& P, const Magnitude& H, std::uint64_t budget) {
  const int n = P.num_vars();
  const MultiFunctional F(P, Functional::H);
  const unsigned long c = F.denominator_exponent();
  const std::uint64_t M = checked_modulus(P.prime(), c, static_cast<unsigned>(n), budget, "multivariate integral");
  Complex acc;
  std::size_t terms = 0;
  std::vector<Integer> z(n, Integer(0));
  std::vector<std::uint64_t> zi(n, 0);
  while (true) {
    for (int i = 0; i < n; ++i) z[i] = zi[i];
    if (F.at(z) >= H) {
      acc += root_of_unity(F.scaled_value(z).get_ui(), M);
      ++terms;
    }
    int i = 0;
    while (i < n && ++zi[i] == M) zi[i++] = 0;
    if (i == n) break;
  }
  SumValue out;
  out.value = acc * powq(static_cast<Real>(M), -static_cast<Real>(n));
  out.err = static_cast<double>(terms + 4) * kTermError;
  out.modulus = M;
  return out;
}

}  // namespace padicsum
