#pragma once

// Solution counts of Q(x) = a mod p^alpha, sublevel sets of univariate
// polynomials, and the check that sublevel sets sit near zeros of derivatives.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "padicsum/expsum.hpp"
#include "padicsum/hensel.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum {

/// Sign of r - m as real numbers, for r >= 0 and m = p^q (or zero).
int compare_real(const Rational& r, const Magnitude& m, Prime p);

struct CongruenceCount {
  Prime p{2};
  int n = 1;
  long alpha = 1;
  /// a reduced mod p^alpha.
  Integer a;
  std::uint64_t N = 0;
  /// p^(-n alpha) N.
  Rational normalized;
  /// H infimum of p^-alpha Q.
  Magnitude H_alpha;
};

/// counts[r] = #{x mod p^alpha : Q(x) = r mod p^alpha}. Q needs integer
/// coefficients; throws BudgetExceeded when p^(n alpha) exceeds the budget.
std::vector<std::uint64_t> residue_histogram(const MultiPadicPoly& Q, long alpha,
                                             std::uint64_t budget = kDefaultBudget);

CongruenceCount count_solutions(const MultiPadicPoly& Q, const Integer& a, long alpha,
                                std::uint64_t budget = kDefaultBudget);
CongruenceCount count_solutions(const PadicPoly& Q, const Integer& a, long alpha,
                                std::uint64_t budget = kDefaultBudget);

struct CongruenceAudit {
  Prime p{2};
  int n = 1;
  long alpha = 1;
  /// sup over a mod p^alpha of p^(-n alpha) N_{a, alpha}, and the first a attaining it.
  Rational sup;
  Integer argmax_a;
  Magnitude H_alpha;
  /// min(1, H_alpha^-1).
  Magnitude capped;
  bool integral_valuation = false;
  /// n = 1 only: p^-1 capped < sup.
  std::optional<bool> lower_holds;
  /// n = 1 and integral valuation only: capped <= sup.
  std::optional<bool> improved_holds;
  /// sup / capped.
  double upper_ratio = 0;

  nlohmann::json to_json() const;
};

CongruenceAudit congruence_audit(const MultiPadicPoly& Q, long alpha, std::uint64_t budget = kDefaultBudget);
CongruenceAudit congruence_audit(const PadicPoly& Q, long alpha, std::uint64_t budget = kDefaultBudget);

/// {z in Z_p : |P(z)| <= p^m_exp, |P^(k)(z)/k!| >= p^n_exp}, as residues mod p^modulus.
/// With Q in Q_p[X] and p^c Q integral, membership is constant on residues mod
/// p^K for K = max(0, c - m_exp, c - n_exp + 1).
struct SublevelSet {
  Prime p{2};
  long m_exp = 0;
  long n_exp = 0;
  int k = 1;
  long modulus = 0;
  /// Increasing representatives in [0, p^modulus).
  std::vector<Integer> members;
  /// members.size() p^-modulus.
  Rational measure;

  nlohmann::json to_json() const;
};

bool in_sublevel(const PadicPoly& P, const Rational& z, long m_exp, long n_exp, int k);
long sublevel_modulus(const PadicPoly& P, long m_exp, long n_exp);

/// The direct phrasing |P| <= p^m, |P^(k)/k!| >= p^n. Throws BudgetExceeded
/// when p^modulus exceeds the budget.
SublevelSet scaled_sublevel_set(const PadicPoly& P, long m_exp, long n_exp, int k,
                                std::uint64_t budget = kDefaultBudget);
/// |Q| <= p^-L, |Q^(k)/k!| >= 1. Requires L >= 1 and 1 <= k <= deg Q.
SublevelSet sublevel_set(const PadicPoly& Q, long L, int k, std::uint64_t budget = kDefaultBudget);

struct ContainmentVerdict {
  SublevelSet set;
  /// p^(-L/k).
  Magnitude radius;
  /// Every member is within `radius` of a zero of some Q^(j), 0 <= j <= k.
  bool holds = false;
  std::size_t failures = 0;
  /// Members placed only through unresolved boxes (distance taken as
  /// max(|z - centre|, box radius) on the assumption that the box holds a zero).
  std::size_t flagged = 0;
  std::size_t zero_count = 0;
  long precision = 0;
  /// Member whose nearest zero is farthest, with that distance and zero.
  std::optional<Integer> worst_member;
  Magnitude worst_distance = Magnitude::zero();
  std::optional<DerivativeZero> worst_zero;
  /// measure / p^(-L/k).
  double empirical_C = 0;

  nlohmann::json to_json() const;
};

ContainmentVerdict containment_check(const PadicPoly& Q, long L, int k, std::uint64_t budget = kDefaultBudget);

/// The scaled phrasing for |P| <= p^m, |P^(k)/k!| >= p^n via Q = p^n P and
/// L = n - m. Returns nullopt when L <= 0, where only the trivial bound applies.
std::optional<ContainmentVerdict> scaled_containment_check(const PadicPoly& P, long m_exp, long n_exp, int k,
                                                           std::uint64_t budget = kDefaultBudget);

}  // namespace padicsum
