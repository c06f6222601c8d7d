#pragma once

// The H and J functionals of a univariate polynomial P:
//
//   H_P(x) = max_{k>=1} |P^(k)(x)/k!|^(1/k),   J_P(x) = max_{k>=2} |P^(k)(x)/k!|^(1/k),
//
// pointwise, and their infima over Z_p computed by branch and bound over the
// tree of p-adic balls B(t, p^-j).
//
// A ball B(t, p^-j) is a certified leaf once F(t) <= p^j: every divided
// derivative in the functional's range then has the same absolute value bound
// at all points of the ball, so F is constant there. Since
// F(t) <= max_k (max_{i>=k} |c_i|)^(1/k) on Z_p, every ball at depth
// `certified_modulus(P)` is a leaf, which bounds the search and gives an
// exhaustive oracle over residues mod p^M.

#include <optional>
#include <vector>

#include "padicsum/polynomial.hpp"

namespace padicsum {

enum class Functional { H, J };

inline int min_index(Functional f) { return f == Functional::H ? 1 : 2; }

struct FunctionalValue {
  Magnitude value = Magnitude::zero();
  /// Smallest k attaining the max; 0 when the value is the zero magnitude.
  int achieving_k = 0;
  /// Evaluation point, or the centre of the witness ball for infima.
  Rational witness;
  /// Set for infima: the witness ball is B(witness, p^-radius_exponent).
  std::optional<long> radius_exponent;
};

struct BallCertificate {
  Rational center;
  long radius_exponent = 0;
  /// Constant value of the functional on the ball.
  Magnitude value;
  int dominating_k = 0;
};

/// Functional value from precomputed divided derivatives dd[k] = P^(k)(x)/k!.
FunctionalValue functional_from_derivatives(const std::vector<Rational>& dd, Prime p, Functional f);

/// Throws PreconditionError when x is not in Z_p.
FunctionalValue h_point(const PadicPoly& P, const Rational& x);
FunctionalValue j_point(const PadicPoly& P, const Rational& x);
FunctionalValue functional_point(const PadicPoly& P, const Rational& x, Functional f);

/// Upper bound for F on Z_p as a magnitude: max_{k in range} (max_{i>=k} |c_i|)^(1/k).
Magnitude functional_ceiling(const PadicPoly& P, Functional f);
/// Depth M at which every ball is a certified leaf.
long certified_modulus(const PadicPoly& P, Functional f);

/// Lower bound for F on B(t, p^-j) from indices whose divided derivative
/// strictly dominates the higher-order Taylor terms (hence is constant on the ball).
Magnitude ball_lower_bound(const std::vector<Rational>& dd, Prime p, long j, Functional f);
/// Upper bound for F on B(t, p^-j) from the ultrametric Taylor estimate.
Magnitude ball_upper_bound(const std::vector<Rational>& dd, Prime p, long j, Functional f);
/// F(t) <= p^j, so F is constant on B(t, p^-j).
bool certifies_constant(const Magnitude& value, long j);

struct InfimumSearch {
  FunctionalValue value;
  BallCertificate witness;
  long certified_modulus = 0;
  std::size_t balls_visited = 0;
};

InfimumSearch functional_infimum(const PadicPoly& P, Functional f);
FunctionalValue h_inf(const PadicPoly& P);
FunctionalValue j_inf(const PadicPoly& P);

struct RegionSearch {
  std::vector<BallCertificate> balls;
  std::size_t balls_visited = 0;
};

/// Disjoint certified balls covering {z in Z_p : F(z) >= threshold}.
RegionSearch functional_region(const PadicPoly& P, const Magnitude& threshold, Functional f);
std::vector<BallCertificate> h_inf_region(const PadicPoly& P, const Magnitude& threshold);

/// Measure of a union of disjoint balls, as an exact rational.
Rational measure(const std::vector<BallCertificate>& balls, Prime p);

/// H (or J) of a multivariate polynomial at points of Z^n,
///   H(z) = max_{|alpha| >= 1} |d^alpha P(z)/alpha!|^(1/|alpha|),
/// from integer-coefficient partials of p^c P.
///
/// F(z) <= p^M makes F constant on z + p^M Z_p^n, and F <= p^M everywhere for
/// M = certified_modulus(), so residues mod p^M suffice for the infimum.
class MultiFunctional {
 public:
  explicit MultiFunctional(const MultiPadicPoly& P, Functional f = Functional::H);

  Magnitude at(const std::vector<Integer>& z) const;
  long certified_modulus() const noexcept { return modulus_; }
  /// p^c P(z) mod p^c, i.e. the numerator of the fractional part of P(z) over p^c.
  Integer scaled_value(const std::vector<Integer>& z) const;
  unsigned long denominator_exponent() const noexcept { return c_; }

 private:
  struct Term {
    MultiIndex e;
    Integer c;
  };
  static Integer eval(const std::vector<Term>& terms, const std::vector<Integer>& z);

  Prime p_;
  unsigned long c_ = 0;
  long modulus_ = 0;
  std::vector<Term> scaled_;
  /// (|alpha|, terms of p^c d^alpha P/alpha!).
  std::vector<std::pair<int, std::vector<Term>>> partials_;
};

}  // namespace padicsum
