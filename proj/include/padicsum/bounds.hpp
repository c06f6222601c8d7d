#pragma once

// Closed-form upper bounds for S_m(f) and I_P, the lower-bound witness search,
// and per-polynomial audit reports.
//
// Bounds are returned without their constants C_d; callers multiply by a
// candidate constant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicsum/expsum.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum {

/// min(1, J^-1), with J = 0 read as J^-1 = infinity.
Magnitude capped_inverse(const Magnitude& J);

/// p > deg f.
bool weil_hypothesis(const PadicPoly& f);

/// min(1, J_{p^-m f}^-1). Computed for any p; check weil_hypothesis separately.
Magnitude thm11_bound(const PadicPoly& f, unsigned m);

/// min(sqrt(p) H^-1, J_P^-1). A zero H or J drops its term; both zero throws
/// PreconditionError.
Magnitude weil_form_bound(const PadicPoly& P, const Magnitude& H);

/// Factorization data P'(z) = a prod (z - xi_i)^(e_i) with distinct rational roots.
struct RootDatum {
  Prime p;
  Rational leading;
  std::vector<Rational> roots;
  std::vector<int> multiplicities;
  /// distance[i][j] = |xi_i - xi_j|.
  std::vector<std::vector<Magnitude>> distance;

  static RootDatum from_roots(Prime p, Rational leading, std::vector<Rational> roots,
                              std::vector<int> multiplicities);
  /// a prod (z - xi_i)^(e_i).
  PadicPoly derivative_poly() const;
  int total_multiplicity() const;
  /// Same roots, leading factor multiplied by w.
  RootDatum scaled(const Rational& w) const;
};

/// max_xi [p^-m / |a prod_{eta != xi} (xi - eta)^(e_eta)|]^(1/(e_xi + 1)) for the
/// factorization of f'. Throws PreconditionError unless the multiplicities sum
/// to deg f - 1 and the datum reproduces f' exactly.
Magnitude lv_bound(const PadicPoly& f, unsigned m, const RootDatum& roots);

struct ClusterChoice {
  int root = 0;
  /// Indices of the minimizing cluster; always contains `root`.
  std::vector<int> cluster;
  Magnitude value;
};

struct ClusterBound {
  Magnitude value;
  /// One entry per root xi: the cluster attaining the minimum for xi.
  std::vector<ClusterChoice> per_root;
};

/// max_xi min_{C containing xi} [1/|a prod_{eta not in C} (xi - eta)^(e_eta)|]^(1/(S(C)+1)),
/// exhaustive over clusters. `roots` factors P'. Throws PreconditionError as lv_bound.
ClusterBound ps_bound(const PadicPoly& P, const RootDatum& roots);

struct LowerBoundWitness {
  long a = 0;
  long c = 0;
  /// |S_m(a f_c)| recomputed by complete_sum.
  double measured = 0;
  /// J_{a p^-m f}.
  Magnitude J;
  /// ord_p J is an integer, so the threshold is 0.25 min(1, J^-1) instead of 0.25 p^-1 min(1, J^-1).
  bool improved = false;
  double threshold = 0;
  /// measured > threshold - 1e-9.
  bool holds = false;
  /// Only part of the a range was searched.
  bool sampled = false;
  /// The pair maximizing |S_m(a f_c)| regardless of threshold.
  long max_a = 0;
  long max_c = 0;
  double max_abs = 0;
  std::uint64_t pairs_evaluated = 0;
};

/// Searches a in (Z/p^m)\{0}, c in Z/p^m for the pair maximizing
/// |S_m(a f_c)| / threshold(a), f_c(x) = f(x) - c x. Sums for all c at once
/// come from one length-p^m DFT per a. When (p^m - 1) p^m exceeds
/// pair_budget, a is sampled with the given seed (a = 1 always included).
LowerBoundWitness lower_bound_search(const PadicPoly& f, unsigned m,
                                     std::uint64_t pair_budget = std::uint64_t{1} << 26,
                                     std::uint64_t seed = 0);

struct BoundReport {
  long p = 0;
  int d = 0;
  unsigned m = 0;
  std::string poly;
  double abs_sum = 0;
  /// J and H of p^-m f.
  Magnitude j_inf;
  Magnitude h_inf;
  Magnitude core_thm11;
  std::optional<Magnitude> core_lv;
  std::optional<Magnitude> core_ps;
  double ratio_thm11 = 0;
  std::optional<double> ratio_lv;
  std::optional<double> ratio_ps;
  std::optional<LowerBoundWitness> witness;
  bool weil_hypothesis = true;
};

/// Measures |S_m(f)| and evaluates every applicable bound core.
BoundReport bound_report(const PadicPoly& f, unsigned m, const std::optional<RootDatum>& roots,
                         bool search_witness, std::uint64_t budget = kDefaultBudget);

/// p,d,m,poly,abs_sum,j_inf,h_inf,core_thm11,core_lv,core_ps,ratio_thm11,ratio_lv,ratio_ps,witness_a,witness_c
std::string csv_header();
std::string csv_row(const BoundReport& r);

struct MultiBoundReport {
  double abs_integral = 0;
  Magnitude H;
  /// p H^-1; unset when H is zero (the bound is infinite).
  std::optional<Magnitude> core;
  /// |I_P(H)| / (p H^-1); 0 when H is zero.
  double ratio = 0;
};

/// |I_P(H)| by enumeration against p H^-1. Throws BudgetExceeded beyond the budget.
MultiBoundReport multivar_bound_audit(const MultiPadicPoly& P, const Magnitude& H,
                                      std::uint64_t budget = kDefaultBudget);

/// %.15g, the number format used in reports.
std::string format_double(double x);

}  // namespace padicsum
