// One PASS/FAIL line per acceptance criterion. With arguments, runs only the
// listed criteria. Exit status is nonzero if any run criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "padicsum/bounds.hpp"
#include "padicsum/congruence.hpp"
#include "padicsum/corpus.hpp"
#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"
#include "padicsum/hensel.hpp"
#include "padicsum/multivar.hpp"
#include "rng.hpp"

using namespace padicsum;
using testing_support::p_power;
using testing_support::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> problems;
  int failures = 0;
  void fail(const std::string& what) {
    pass = false;
    ++failures;
    if (problems.size() < 5) problems.push_back(what);
  }
};

PadicPoly poly(long p, std::vector<Rational> c) { return PadicPoly(Prime(p), std::move(c)); }

double dist(const Complex& a, const Complex& b) { return static_cast<double>((a - b).abs()); }

CorpusSpec lower_bound_corpus() {
  CorpusSpec spec;
  spec.primes = {3, 5, 7, 11};
  spec.min_degree = 1;
  spec.max_degree = 5;
  spec.min_m = 1;
  spec.max_m = 4;
  spec.size = 200;
  spec.seed = 20240601;
  spec.require_p_above_degree = true;
  return spec;
}

// |S_m(u p^k z^2 + e z)| with e = p^k e'.
void gauss_sums(Outcome& o) {
  Rng rng(101);
  int cases = 0;
  double worst = 0;
  for (long pv : {3, 5, 7, 11}) {
    const Prime p(pv);
    for (unsigned m = 0; m <= 5; ++m)
      for (unsigned k = 0; k <= m; ++k)
        for (int rep = 0; rep < 3; ++rep) {
          if (m == 0) continue;
          const Rational pk = p_power(p, k);
          const Rational u(rng.unit(pv, 2));
          const Rational e = pk * Rational(rng.range(-200, 200));
          const PadicPoly f = poly(pv, {0, e, u * pk});
          const double got = complete_sum(f, m).abs();
          const double want = std::pow(static_cast<double>(pv), -(static_cast<double>(m) - k) / 2);
          worst = std::max(worst, std::abs(got - want));
          ++cases;
          if (!(std::abs(got - want) <= 1e-9))
            o.fail("p=" + std::to_string(pv) + " m=" + std::to_string(m) + " k=" + std::to_string(k));
        }
    // m <= k: the sum is 1.
    for (unsigned m = 1; m <= 3; ++m) {
      const PadicPoly f = poly(pv, {0, p_power(p, m) * 7, Rational(rng.unit(pv)) * p_power(p, m + 1)});
      const double got = complete_sum(f, m).abs();
      worst = std::max(worst, std::abs(got - 1));
      ++cases;
      if (!(std::abs(got - 1) <= 1e-9)) o.fail("m <= k, p=" + std::to_string(pv));
    }
  }
  o.detail << cases << " sums, max deviation " << format_double(worst);
}

void lower_bound(Outcome& o) {
  const auto corpus = generate_corpus(lower_bound_corpus());
  int improved = 0, sampled = 0;
  double min_margin = 1e300;
  for (const auto& mem : corpus) {
    const auto w = lower_bound_search(mem.f, mem.m, std::uint64_t{1} << 20, mem.index);
    improved += w.improved;
    sampled += w.sampled;
    min_margin = std::min(min_margin, w.measured / w.threshold);
    if (!w.holds)
      o.fail(mem.f.to_string() + " p=" + std::to_string(mem.f.prime().value()) + " m=" + std::to_string(mem.m));
  }
  o.detail << corpus.size() << " members, " << improved << " with integral ord J, " << sampled
           << " sampled, min |S|/threshold " << format_double(min_margin);
}

void sharpness(Outcome& o) {
  for (long r : {1, 2}) {
    const Prime p(7);
    const PadicPoly P = poly(7, {0, Rational(5) * p_power(p, -r), 0, p_power(p, -(3 * r - 2))});
    if (h_inf(P).value != Magnitude::power(r)) o.fail("h_inf r=" + std::to_string(r));
    for (long s = 1; s < 7; ++s)
      if (j_point(P, p_power(p, r - 1) * s).value != Magnitude::power(Exponent(2 * r - 1, 2)))
        o.fail("j_point r=" + std::to_string(r) + " s=" + std::to_string(s));
    std::complex<double> S = 0;
    for (int x = 0; x < 7; ++x) S += std::polar(1.0, 2 * M_PI * ((x * x * x + 5 * x) % 7) / 7.0);
    const double want = std::pow(7.0, -r) * std::abs(S);
    const double got = full_integral(P).abs();
    if (!(std::abs(got - want) <= 1e-9)) o.fail("|I_P| r=" + std::to_string(r));
    const auto res = structured_eval(P);
    if (res.epsilon != 1 || res.s != r || res.Q != std::vector<Integer>{0, 5, 0, 1})
      o.fail("structured_eval r=" + std::to_string(r));
    if (!(std::abs(res.total.abs() - want) <= 1e-9)) o.fail("structured value r=" + std::to_string(r));
    o.detail << "r=" << r << ": |I_P| = " << format_double(got) << " ";
  }
  o.detail << "epsilon = 1";
}

void loxton_vaughan(Outcome& o) {
  CorpusSpec spec;
  spec.primes = {5, 7};
  spec.min_degree = 2;
  spec.max_degree = 5;
  spec.min_m = 1;
  spec.max_m = 4;
  spec.size = 400;
  spec.seed = 4242;
  spec.families = {Family::Split, Family::Parametric};
  int n = 0;
  double worst = 0;
  for (const auto& mem : generate_corpus(spec)) {
    if (!mem.roots || n == 100) continue;
    ++n;
    const Prime p = mem.f.prime();
    const Magnitude lv = lv_bound(mem.f, mem.m, *mem.roots);
    const Rational sc = p_power(p, -static_cast<long>(mem.m));
    const auto ps = ps_bound(mem.f.scaled(sc), mem.roots->scaled(sc));
    const double s = complete_sum(mem.f, mem.m).abs();
    const int d = mem.f.degree();
    worst = std::max(worst, s / lv.to_double(p));
    if (!(s <= (d - 1) * lv.to_double(p) + 1e-9)) o.fail("|S| > (d-1) lv for " + mem.f.to_string());
    if (!(ps.value <= lv)) o.fail("ps > lv for " + mem.f.to_string());
  }
  if (n < 100) o.fail("only " + std::to_string(n) + " split members");
  o.detail << n << " members, max |S|/lv " << format_double(worst);
}

bool vanishes_mod(const PadicPoly& phi, const Rational& t, long N) {
  const Rational v = phi(t);
  return v == 0 || ord_p(v, phi.prime()) >= Valuation(N);
}

void hensel_suite(Outcome& o) {
  Rng rng(505);
  int found = 0, claims = 0;
  for (int it = 0; it < 100000 && found < 200; ++it) {
    const long pv = std::vector<long>{3, 5, 7, 11}[rng.below(4)];
    const Prime p(pv);
    const int L = static_cast<int>(rng.range(1, 4));
    const int d = static_cast<int>(rng.range(L + 1, L + 3));
    PadicPoly base = poly(pv, {1});
    const long r = rng.range(0, 50);
    for (int i = 0; i < L; ++i) base = base * poly(pv, {-r, 1});
    std::vector<Rational> g(d - L + 1);
    for (auto& c : g) c = rng.range(-20, 20);
    g.back() = rng.range(1, 20);
    const PadicPoly phi = base * PadicPoly(p, g) + poly(pv, {Rational(rng.range(-3, 3)) * p_power(p, rng.range(0, 6))});
    const Rational t0(r + pv * rng.range(0, 3));
    HenselCertificate cert;
    try {
      cert = check_hypotheses(phi, t0, L);
    } catch (const PreconditionError&) {
      continue;
    }
    if (!cert.hypotheses_met) continue;
    ++found;
    const std::string tag = phi.to_string() + " p=" + std::to_string(pv) + " t0=" + to_string(t0) + " L=" + std::to_string(L);
    try {
      const auto root = lift_root(phi, t0, L, 10, true);
      claims += root.claims_checked;
      if (!vanishes_mod(phi, root.t, 10)) o.fail("root not mod p^10: " + tag);
      if (!(root.distance <= cert.step_bound)) o.fail("distance: " + tag);
    } catch (const InternalError& e) {
      o.fail(std::string(e.what()) + ": " + tag);
      // The conclusions are checked separately when a claim fails.
      const auto root = lift_root(phi, t0, L, 10, false);
      if (!vanishes_mod(phi, root.t, 10) || !(root.distance <= cert.step_bound)) o.fail("conclusion: " + tag);
    }
  }
  if (found < 200) o.fail("only " + std::to_string(found) + " instances");
  o.detail << found << " instances, " << claims << " claim rounds checked";
}

void containment(Outcome& o) {
  Rng rng(606);
  std::map<int, double> worst_C;
  int members = 0, flagged = 0, hits = 0;
  for (int it = 0; it < 100; ++it) {
    const long pv = std::vector<long>{3, 5, 7}[rng.below(3)];
    const Prime p(pv);
    const int d = static_cast<int>(rng.range(1, 4));
    std::vector<Rational> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = Rational(rng.range(-60, 60)) * p_power(p, rng.range(0, 2));
    while (c[d] == 0) c[d] = rng.range(1, 60);
    const PadicPoly Q(p, c);
    const long L = rng.range(1, 6);
    const int k = static_cast<int>(rng.range(1, d));
    const auto v = containment_check(Q, L, k);
    members += static_cast<int>(v.set.members.size());
    flagged += static_cast<int>(v.flagged);
    hits += !v.set.members.empty();
    worst_C[d] = std::max(worst_C[d], v.empirical_C);
    if (!v.holds)
      o.fail(Q.to_string() + " p=" + std::to_string(pv) + " L=" + std::to_string(L) + " k=" + std::to_string(k) + " (" +
             std::to_string(v.failures) + " members)");
    if (!std::isfinite(v.empirical_C)) o.fail("non-finite measure constant");
  }
  o.detail << "100 instances, " << hits << " nonempty, " << members << " members, " << flagged << " flagged; C_d:";
  for (const auto& [d, C] : worst_C) o.detail << " d=" << d << ":" << format_double(C) << " (cap " << d * (d + 1) / 2 + 1 << ")";
}

void congruence(Outcome& o) {
  Rng rng(707);
  int improved = 0;
  double worst = 0;
  for (int it = 0; it < 200; ++it) {
    const long pv = std::vector<long>{2, 3, 5, 7}[rng.below(4)];
    const Prime p(pv);
    const int d = static_cast<int>(rng.range(1, 5));
    const long alpha = rng.range(1, 4);
    std::vector<Rational> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = Rational(rng.range(-60, 60)) * p_power(p, rng.range(0, alpha));
    while (c[d] == 0) c[d] = rng.range(1, 60);
    const auto a = congruence_audit(PadicPoly(p, c), alpha);
    if (!*a.lower_holds) o.fail("lower: " + PadicPoly(p, c).to_string() + " alpha=" + std::to_string(alpha));
    if (a.integral_valuation) {
      ++improved;
      if (!*a.improved_holds) o.fail("improved: " + PadicPoly(p, c).to_string() + " alpha=" + std::to_string(alpha));
    }
    worst = std::max(worst, a.upper_ratio);
  }
  double worst2 = 0;
  for (int it = 0; it < 20; ++it) {
    const long pv = std::vector<long>{3, 5}[rng.below(2)];
    const Prime p(pv);
    MultiPadicPoly Q(p, 2);
    for (const auto& e : multi_indices_up_to(2, 3))
      if (rng.below(2) == 0) Q.add_term(e, Rational(rng.range(-20, 20)) * p_power(p, rng.range(0, 1)));
    Q.add_term({3, 0}, Rational(rng.unit(pv)));
    const auto a = congruence_audit(Q, rng.range(1, 2));
    worst2 = std::max(worst2, a.upper_ratio);
  }
  o.detail << "200 one-variable instances (" << improved << " with integral ord H), max sup/min(1,H^-1) n=1: "
           << format_double(worst) << ", n=2: " << format_double(worst2);
}

void basis_identities(Outcome& o) {
  Rng rng(808);
  int polys = 0;
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 4; ++k) {
      const auto& b = build_basis(n, k);
      if (b.vectors.size() != form_dimension(n, k)) o.fail("basis size");
      const Prime p(5);
      std::vector<MultiPadicPoly> powers;
      for (const auto& u : b.vectors) {
        MultiPadicPoly w(p, n);
        for (int i = 0; i < n; ++i) {
          MultiIndex e(n, 0);
          e[i] = 1;
          w.add_term(e, Rational(u[i]));
        }
        MultiPadicPoly acc = w;
        for (int r = 1; r < k; ++r) acc = acc * w;
        powers.push_back(acc);
      }
      for (std::size_t a = 0; a < b.indices.size(); ++a) {
        RationalTerms sum;
        for (std::size_t j = 0; j < powers.size(); ++j)
          for (const auto& [e, c] : powers[j].terms()) sum[e] += b.coeffs[a][j] * c;
        std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
        if (sum != RationalTerms{{b.indices[a], Rational(1)}}) o.fail("polynomial identity n=" + std::to_string(n));
      }
      for (int it = 0; it < 100; ++it) {
        const Prime q(std::vector<long>{2, 3, 5, 7}[rng.below(4)]);
        MultiPadicPoly P(q, n);
        for (const auto& e : multi_indices_up_to(n, k + 2))
          if (rng.below(3) == 0) P.add_term(e, Rational(rng.range(-30, 30)) * p_power(q, rng.range(-2, 2)));
        ++polys;
        for (const auto& alpha : b.indices)
          if (!decompose_partial(P, alpha, b).equal) o.fail("operator identity n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  o.detail << "12 bases, " << polys << " random polynomials, every alpha";
}

void structured_oracle(Outcome& o) {
  const auto corpus = generate_corpus(lower_bound_corpus());
  double worst = 0;
  for (const auto& mem : corpus) {
    const Prime p = mem.f.prime();
    const auto res = structured_eval(mem.f.scaled(p_power(p, -static_cast<long>(mem.m))));
    const double gap = dist(res.total.value, complete_sum(mem.f, mem.m).value);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-9)) o.fail(mem.f.to_string());
  }
  o.detail << corpus.size() << " members, max gap " << format_double(worst) << "; p=5 d=3 m=6 residues visited:";
  CorpusRng rng(909);
  const Prime p(5);
  for (int it = 0; it < 5; ++it) {
    const PadicPoly f = dense_member(rng, p, 3, 6);
    const auto res = structured_eval(f.scaled(p_power(p, -6)));
    o.detail << " " << res.residues_visited;
    if (!(res.residues_visited < 15625)) o.fail("visited " + std::to_string(res.residues_visited) + " for " + f.to_string());
    if (!(dist(res.total.value, complete_sum(f, 6).value) <= 1e-9)) o.fail("m=6 value for " + f.to_string());
  }
  o.detail << " of 15625";
}

void several_variables(Outcome& o) {
  Rng rng(1010);
  std::map<int, double> worst;
  int runs = 0;
  for (long pv : {3, 5})
    for (unsigned m = 1; m <= 3; ++m)
      for (int d = 1; d <= 3; ++d)
        for (int rep = 0; rep < 2; ++rep) {
          const Prime p(pv);
          MultiPadicPoly Q(p, 2);
          for (const auto& e : multi_indices_up_to(2, d))
            if (rng.below(2) == 0) Q.add_term(e, Rational(rng.range(-30, 30)));
          MultiIndex top{static_cast<int>(rng.range(0, d)), 0};
          top[1] = d - top[0];
          Q.add_term(top, Rational(rng.unit(pv)));
          const MultiPadicPoly P = Q.scaled(p_power(p, -static_cast<long>(m)));
          std::vector<Magnitude> Hs{h_inf_multi(P).value};
          for (long j = 0; j <= 2 * static_cast<long>(m) + 2; ++j) Hs.push_back(Magnitude::power(Exponent(j, 2)));
          for (const auto& H : Hs) {
            if (H.is_zero()) continue;
            const auto r = multivar_bound_audit(P, H);
            ++runs;
            if (!std::isfinite(r.ratio)) o.fail("non-finite ratio");
            worst[d] = std::max(worst[d], r.ratio);
          }
        }
  o.detail << runs << " integrals, max |I_P(H)|/(p H^-1) by d (n=2):";
  for (const auto& [d, C] : worst) o.detail << " d=" << d << ":" << format_double(C);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Gauss-sum exactness", gauss_sums},
      {"lower-bound witness", lower_bound},
      {"cubic sharpness example", sharpness},
      {"Loxton-Vaughan with C_d = d-1", loxton_vaughan},
      {"Hensel suite", hensel_suite},
      {"sublevel containment", containment},
      {"congruence bounds", congruence},
      {"basis identities", basis_identities},
      {"structured evaluator oracle", structured_oracle},
      {"several-variable audit", several_variables},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);

  bool all = true;
  for (int id : which) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::printf("criterion %d: unknown\n", id);
      all = false;
      continue;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[id - 1].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s  %s  [%.1f s]\n", id, criteria[id - 1].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str(), secs);
    if (o.failures) std::printf("    %d failing checks, first ones:\n", o.failures);
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
