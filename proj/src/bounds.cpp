#include "padicsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <random>

#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"

namespace padicsum {

Magnitude capped_inverse(const Magnitude& J) {
  if (J.is_zero()) return Magnitude();
  return min(Magnitude(), J.inverse());
}

bool weil_hypothesis(const PadicPoly& f) {
  return static_cast<long>(f.prime().value()) > f.degree();
}

namespace {

Rational inverse_p_power(Prime p, unsigned m) { return Rational(Integer(1), pow(p, m)); }

}  // namespace

Magnitude thm11_bound(const PadicPoly& f, unsigned m) {
  return capped_inverse(j_inf(f.scaled(inverse_p_power(f.prime(), m))).value);
}

Magnitude weil_form_bound(const PadicPoly& P, const Magnitude& H) {
  const Magnitude J = j_inf(P).value;
  if (H.is_zero() && J.is_zero()) throw PreconditionError("both terms of the bound are infinite");
  if (H.is_zero()) return J.inverse();
  const Magnitude weil = Magnitude::power(Exponent(1, 2)) * H.inverse();
  if (J.is_zero()) return weil;
  return min(weil, J.inverse());
}

RootDatum RootDatum::from_roots(Prime p, Rational leading, std::vector<Rational> roots,
                                std::vector<int> multiplicities) {
  if (roots.size() != multiplicities.size())
    throw PreconditionError("root and multiplicity counts differ");
  if (leading == 0) throw PreconditionError("leading factor is zero");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (multiplicities[i] < 1) throw PreconditionError("multiplicities must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (roots[i] == roots[j]) throw PreconditionError("roots must be distinct");
  }
  RootDatum r{p, std::move(leading), std::move(roots), std::move(multiplicities), {}};
  const std::size_t n = r.roots.size();
  r.distance.assign(n, std::vector<Magnitude>(n, Magnitude::zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) r.distance[i][j] = Magnitude::of(Rational(r.roots[i] - r.roots[j]), p);
  return r;
}

PadicPoly RootDatum::derivative_poly() const {
  PadicPoly out(p, {leading});
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (int k = 0; k < multiplicities[i]; ++k) out = out * PadicPoly(p, {Rational(-roots[i]), Rational(1)});
  return out;
}

int RootDatum::total_multiplicity() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

RootDatum RootDatum::scaled(const Rational& w) const {
  RootDatum r = *this;
  r.leading *= w;
  return r;
}

namespace {

void check_datum(const PadicPoly& P, const RootDatum& r) {
  if (r.total_multiplicity() != P.degree() - 1)
    throw PreconditionError("multiplicities sum to " + std::to_string(r.total_multiplicity()) +
                            ", expected deg - 1 = " + std::to_string(P.degree() - 1));
  if (!(r.derivative_poly() == P.derivative()))
    throw PreconditionError("root datum does not reproduce the derivative");
}

// |a prod_{eta not in C} (xi - eta)^(e_eta)|, C given by a membership mask.
Magnitude outside_product(const RootDatum& r, std::size_t xi, const std::vector<bool>& in_cluster) {
  Magnitude out = Magnitude::of(r.leading, r.p);
  for (std::size_t j = 0; j < r.roots.size(); ++j)
    if (!in_cluster[j]) out = out * r.distance[xi][j].pow(r.multiplicities[j]);
  return out;
}

}  // namespace

Magnitude lv_bound(const PadicPoly& f, unsigned m, const RootDatum& roots) {
  check_datum(f, roots);
  const Magnitude numerator = Magnitude::power(-static_cast<long long>(m));
  Magnitude out = Magnitude::zero();
  const std::size_t n = roots.roots.size();
  for (std::size_t xi = 0; xi < n; ++xi) {
    std::vector<bool> self(n, false);
    self[xi] = true;
    const Magnitude v = (numerator / outside_product(roots, xi, self)).root(roots.multiplicities[xi] + 1);
    out = max(out, v);
  }
  return out;
}

ClusterBound ps_bound(const PadicPoly& P, const RootDatum& roots) {
  check_datum(P, roots);
  const std::size_t n = roots.roots.size();
  if (n > 20) throw PreconditionError("too many roots for exhaustive cluster enumeration");
  ClusterBound out;
  out.value = Magnitude::zero();
  for (std::size_t xi = 0; xi < n; ++xi) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != xi) others.push_back(j);
    std::optional<ClusterChoice> best;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << others.size()); ++mask) {
      std::vector<bool> in(n, false);
      in[xi] = true;
      int S = roots.multiplicities[xi];
      for (std::size_t b = 0; b < others.size(); ++b)
        if (mask >> b & 1) {
          in[others[b]] = true;
          S += roots.multiplicities[others[b]];
        }
      const Magnitude v = outside_product(roots, xi, in).inverse().root(S + 1);
      if (!best || v < best->value) {
        ClusterChoice c{static_cast<int>(xi), {}, v};
        for (std::size_t j = 0; j < n; ++j)
          if (in[j]) c.cluster.push_back(static_cast<int>(j));
        best = std::move(c);
      }
    }
    out.value = max(out.value, best->value);
    out.per_root.push_back(std::move(*best));
  }
  return out;
}

namespace {

using cd = std::complex<double>;

// out[b] = sum_x in[x * stride] tw[(b x mod n) * step], tw[k] = e^{-2 pi i k/N}, n = N/step.
void dft_rec(const cd* in, std::size_t stride, std::size_t n, cd* out, std::size_t p,
             const std::vector<cd>& tw, std::size_t step, std::vector<cd>& scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t q = n / p;
  for (std::size_t r = 0; r < p; ++r) dft_rec(in + r * stride, stride * p, q, out + r * q, p, tw, step * p, scratch);
  for (std::size_t b = 0; b < n; ++b) {
    cd s = 0;
    for (std::size_t r = 0; r < p; ++r) s += tw[((b * r) % n) * step] * out[r * q + b % q];
    scratch[b] = s;
  }
  std::copy(scratch.begin(), scratch.begin() + static_cast<long>(n), out);
}

std::uint64_t mod_poly_at(const std::vector<std::uint64_t>& c, std::uint64_t x, std::uint64_t M) {
  unsigned __int128 acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % M;
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

LowerBoundWitness lower_bound_search(const PadicPoly& f, unsigned m, std::uint64_t pair_budget,
                                     std::uint64_t seed) {
  const Prime p = f.prime();
  for (const auto& c : f.coeffs())
    if (c.get_den() != 1) throw PreconditionError("lower_bound_search needs integer coefficients");
  if (m == 0) throw PreconditionError("m must be positive");
  const Integer Mz = pow(p, m);
  if (!Mz.fits_ulong_p() || Mz.get_ui() > kDefaultBudget)
    throw BudgetExceeded("lower_bound_search modulus", Mz.fits_ulong_p() ? Mz.get_ui() : ~0ULL, kDefaultBudget);
  const std::uint64_t N = Mz.get_ui();

  // J_{a p^-m f} only depends on ord_p a.
  std::vector<Magnitude> J(m);
  std::vector<double> threshold(m);
  std::vector<char> improved(m);
  for (unsigned v = 0; v < m; ++v) {
    J[v] = j_inf(f.scaled(Rational(pow(p, v), Mz))).value;
    improved[v] = J[v].has_integral_valuation();
    const double core = capped_inverse(J[v]).to_double(p);
    threshold[v] = improved[v] ? 0.25 * core : 0.25 * core / static_cast<double>(p.value());
  }

  std::vector<std::uint64_t> coeffs;
  for (const auto& c : f.coeffs()) {
    Integer r = c.get_num() % Mz;
    if (r < 0) r += Mz;
    coeffs.push_back(r.get_ui());
  }
  std::vector<std::uint64_t> fx(N);
  for (std::uint64_t x = 0; x < N; ++x) fx[x] = mod_poly_at(coeffs, x, N);

  std::vector<cd> tw(N), plus(N);
  for (std::uint64_t k = 0; k < N; ++k) {
    const double angle = 2 * M_PI * static_cast<double>(k) / static_cast<double>(N);
    tw[k] = cd(std::cos(angle), -std::sin(angle));
    plus[k] = std::conj(tw[k]);
  }

  LowerBoundWitness w;
  std::vector<std::uint64_t> as;
  if ((N - 1) > pair_budget / N) {
    w.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(1, N - 1);
    const std::uint64_t count = std::max<std::uint64_t>(1, pair_budget / N);
    as.push_back(1);
    while (as.size() < count) as.push_back(pick(rng));
  } else {
    for (std::uint64_t a = 1; a < N; ++a) as.push_back(a);
  }

  std::vector<cd> g(N), T(N), scratch(N);
  double best_ratio = -1;
  for (const std::uint64_t a : as) {
    unsigned v = 0;
    for (std::uint64_t t = a; t % p.value() == 0; t /= p.value()) ++v;
    for (std::uint64_t x = 0; x < N; ++x)
      g[x] = plus[static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * fx[x]) % N)];
    dft_rec(g.data(), 1, N, T.data(), p.value(), tw, 1, scratch);
    for (std::uint64_t c = 0; c < N; ++c) {
      const std::uint64_t b = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * c) % N);
      const double s = std::abs(T[b]) / static_cast<double>(N);
      const double ratio = s / threshold[v];
      if (ratio > best_ratio) {
        best_ratio = ratio;
        w.a = static_cast<long>(a);
        w.c = static_cast<long>(c);
      }
      if (s > w.max_abs) {
        w.max_abs = s;
        w.max_a = static_cast<long>(a);
        w.max_c = static_cast<long>(c);
      }
    }
    w.pairs_evaluated += N;
  }

  unsigned v = 0;
  for (long t = w.a; t % static_cast<long>(p.value()) == 0; t /= static_cast<long>(p.value())) ++v;
  const PadicPoly linear(p, {Rational(0), Rational(w.c)});
  const PadicPoly af = (f - linear).scaled(Rational(w.a));
  w.measured = complete_sum(af, m, kDefaultBudget, false).abs();
  w.J = J[v];
  w.improved = improved[v];
  w.threshold = threshold[v];
  w.holds = w.measured > w.threshold - 1e-9;
  const PadicPoly max_poly = (f - PadicPoly(p, {Rational(0), Rational(w.max_c)})).scaled(Rational(w.max_a));
  w.max_abs = complete_sum(max_poly, m, kDefaultBudget, false).abs();
  return w;
}

BoundReport bound_report(const PadicPoly& f, unsigned m, const std::optional<RootDatum>& roots,
                         bool search_witness, std::uint64_t budget) {
  const Prime p = f.prime();
  BoundReport r;
  r.p = static_cast<long>(p.value());
  r.d = f.degree();
  r.m = m;
  r.poly = f.to_string();
  r.weil_hypothesis = weil_hypothesis(f);
  r.abs_sum = complete_sum(f, m, budget, false).abs();
  const PadicPoly P = f.scaled(inverse_p_power(p, m));
  r.j_inf = j_inf(P).value;
  r.h_inf = h_inf(P).value;
  r.core_thm11 = capped_inverse(r.j_inf);
  r.ratio_thm11 = r.abs_sum / r.core_thm11.to_double(p);
  if (roots && f.degree() >= 2) {
    r.core_lv = lv_bound(f, m, *roots);
    r.core_ps = ps_bound(P, roots->scaled(inverse_p_power(p, m))).value;
    r.ratio_lv = r.abs_sum / r.core_lv->to_double(p);
    r.ratio_ps = r.abs_sum / r.core_ps->to_double(p);
  }
  if (search_witness) r.witness = lower_bound_search(f, m);
  return r;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string csv_header() {
  return "p,d,m,poly,abs_sum,j_inf,h_inf,core_thm11,core_lv,core_ps,ratio_thm11,ratio_lv,ratio_ps,"
         "witness_a,witness_c";
}

std::string csv_row(const BoundReport& r) {
  const auto opt_mag = [](const std::optional<Magnitude>& m) { return m ? m->to_string() : std::string(); };
  const auto opt_num = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  std::string out = std::to_string(r.p) + "," + std::to_string(r.d) + "," + std::to_string(r.m) + ",\"" +
                    r.poly + "\"," + format_double(r.abs_sum) + "," + r.j_inf.to_string() + "," +
                    r.h_inf.to_string() + "," + r.core_thm11.to_string() + "," + opt_mag(r.core_lv) + "," +
                    opt_mag(r.core_ps) + "," + format_double(r.ratio_thm11) + "," + opt_num(r.ratio_lv) + "," +
                    opt_num(r.ratio_ps) + ",";
  if (r.witness) out += std::to_string(r.witness->a) + "," + std::to_string(r.witness->c);
  else out += ",";
  return out;
}

MultiBoundReport multivar_bound_audit(const MultiPadicPoly& P, const Magnitude& H, std::uint64_t budget) {
  MultiBoundReport r;
  r.H = H;
  r.abs_integral = multi_local_integral(P, H, budget).abs();
  if (!H.is_zero()) {
    r.core = Magnitude::power(1) * H.inverse();
    r.ratio = r.abs_integral / r.core->to_double(P.prime());
  }
  return r;
}

}  // namespace padicsum
