#pragma once

// Higher-order Hensel lifting, Newton polygons and zeros of derivatives.

#include <optional>
#include <string>
#include <vector>

#include "padicsum/polynomial.hpp"

namespace padicsum {

/// Hypothesis record of the order-L Hensel lemma at t0.
///
///   delta   = |phi(t0) phi'(t0)^-1 (phi^(L)(t0)/L!)^-1|
///   delta_k = |(phi^(k+1)(t0)/(k+1)!)/(phi^(k)(t0)/k!) * phi(t0)/phi'(t0)|,  1 <= k <= L-1
///
/// L = 1 requires lambda_+ delta < 1. L >= 2 requires lambda_+ delta <= 1,
/// delta_1 < 1 and delta_k <= 1 for 2 <= k <= L-1.
struct HenselCertificate {
  Magnitude lambda;
  Magnitude lambda_plus;
  Magnitude delta;
  /// delta_k[k-1] = delta_k for 1 <= k <= L-1.
  std::vector<Magnitude> delta_k;
  int L = 1;
  Rational t0;
  /// |phi(t0)/phi'(t0)|: the bound on |t - t0| for the lifted root.
  Magnitude step_bound;
  /// Contraction rate of the Newton sequence: delta_1 for L >= 2, lambda_+ delta for L = 1.
  Magnitude rate;
  bool hypotheses_met = false;
  /// Empty when met.
  std::string failing_condition;
};

/// Throws PreconditionError if t0 is not in Z_p or phi^(k)(t0) = 0 for some 1 <= k <= L.
HenselCertificate check_hypotheses(const PadicPoly& phi, const Rational& t0, int L);

struct LiftedRoot {
  /// Exact rational Newton iterate.
  Rational t;
  /// |phi(t)| <= p^-precision.
  long precision = 0;
  /// |t - t0|, exact.
  Magnitude distance;
  int iterations = 0;
  /// Claims (1)_n, (2)_n, (3)_n were checked for n = 1..claims_checked.
  int claims_checked = 0;
  /// Violated claims such as "(3)_2 at k = 3"; only filled when not strict.
  std::vector<std::string> claim_failures;
};

/// Newton iteration t_n = t_(n-1) - phi(t_(n-1))/phi'(t_(n-1)) until |phi(t_n)| <= p^-N.
///
/// At every step asserts
///   (1)_n |t_n - t_(n-1)| <= |phi(t0)/phi'(t0)| rate^(2^(n-1)-1)
///   (2)_n |phi(t_(n-1))|  <= |phi(t0)| rate^(2^(n-1)-1)
///   (3)_n |phi^(k)(t_(n-1))/k!| = |phi^(k)(t0)/k!| for 1 <= k <= L
/// and throws InternalError if one fails (strict) or records it and continues.
/// Failing to converge within the count implied by the rate, or ending farther
/// than |phi(t0)/phi'(t0)| from t0, always throws InternalError. Throws
/// PreconditionError when the hypotheses are not met.
LiftedRoot lift_root(const PadicPoly& phi, const Rational& t0, int L, long N, bool strict = true);

struct PolygonSegment {
  Exponent slope;
  int length = 0;
};

struct NewtonPolygon {
  /// (i, ord_p c_i) for the nonzero coefficients past the factored power of z.
  std::vector<std::pair<int, long long>> points;
  std::vector<std::pair<int, long long>> vertices;
  std::vector<PolygonSegment> segments;
  /// Multiplicity of the root z = 0 (valuation +inf), factored out first.
  int zero_roots = 0;
  /// (valuation, multiplicity) of the nonzero roots, from -slope.
  std::vector<std::pair<Exponent, int>> root_valuations;
};

NewtonPolygon newton_polygon(const PadicPoly& g);

struct DerivativeZero {
  /// Zero of Q^(order).
  int order = 0;
  /// Centre: an exact zero, a Newton approximation, or the centre of an unresolved box.
  Rational value;
  /// The true zero lies within this distance of `value` (zero when exact).
  Magnitude error_radius = Magnitude::zero();
  long precision = 0;
  bool exact = false;
  /// False for a residue box at depth `precision` that could be neither
  /// excluded nor certified to hold a simple zero.
  bool resolved = true;
};

/// All zeros in Z_p of Q^(j), 0 <= j <= deg Q, to precision N.
std::vector<DerivativeZero> derivative_zeros(const PadicPoly& Q, long N);
/// Zeros of one polynomial in Z_p (order field set to `order`).
std::vector<DerivativeZero> zeros_in_Zp(const PadicPoly& R, long N, int order = 0);

}  // namespace padicsum
