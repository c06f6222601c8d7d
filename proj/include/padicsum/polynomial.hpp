#pragma once

#include <map>
#include <string>
#include <vector>

#include "padicsum/padic.hpp"

namespace padicsum {

/// Divided derivatives f^(k)(t)/k!, k = 0..d, of the polynomial with
/// coefficients `coeffs` (constant term first), by repeated synthetic division.
std::vector<Rational> divided_derivatives_at(const std::vector<Rational>& coeffs,
                                             const Rational& t);

/// Binomial coefficient C(n, k) as an exact integer.
Integer binomial(unsigned long n, unsigned long k);

/// Univariate polynomial with coefficients in Q cap Z[1/p].
class PadicPoly {
 public:
  explicit PadicPoly(Prime p) : p_(p) {}
  /// Throws ParseError naming the coefficient index if a denominator is not a p-power.
  PadicPoly(Prime p, std::vector<Rational> coeffs);
  static PadicPoly monomial(Prime p, Rational c, unsigned k);

  Prime prime() const noexcept { return p_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational operator()(const Rational& x) const;
  PadicScalar eval(const PadicScalar& x) const;

  /// f^(k)/k!, coefficient of x^(j-k) is C(j,k) c_j.
  PadicPoly divided_derivative(unsigned k) const;
  /// Plain derivative.
  PadicPoly derivative() const;
  /// g(w) = f(t + p^j w); coefficient k is p^(jk) f^(k)(t)/k!.
  PadicPoly taylor_shift(const Rational& t, long j) const;
  /// All divided derivatives at a point.
  std::vector<Rational> divided_derivatives(const Rational& t) const {
    return divided_derivatives_at(c_, t);
  }

  /// max_j |c_j| (zero magnitude for the zero polynomial).
  Magnitude max_coeff_abs() const;
  /// Smallest c >= 0 with p^c f in Z_p[X].
  unsigned long denominator_exponent() const;

  PadicPoly scaled(const Rational& w) const;
  friend PadicPoly operator+(const PadicPoly& a, const PadicPoly& b);
  friend PadicPoly operator-(const PadicPoly& a, const PadicPoly& b);
  friend PadicPoly operator*(const PadicPoly& a, const PadicPoly& b);
  friend bool operator==(const PadicPoly& a, const PadicPoly& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }

  /// Human form, e.g. "x^3/5 + x".
  std::string to_string() const;

 private:
  void trim();
  Prime p_;
  std::vector<Rational> c_;
};

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& a);

/// Multivariate polynomial over Q cap Z[1/p] as a sparse map alpha -> c_alpha.
class MultiPadicPoly {
 public:
  MultiPadicPoly(Prime p, int n) : p_(p), n_(n) {}
  MultiPadicPoly(Prime p, int n, std::map<MultiIndex, Rational> terms);

  Prime prime() const noexcept { return p_; }
  int num_vars() const noexcept { return n_; }
  /// -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<MultiIndex, Rational>& terms() const noexcept { return terms_; }
  Rational coeff(const MultiIndex& a) const;
  void add_term(const MultiIndex& a, const Rational& c);

  Rational operator()(const std::vector<Rational>& z) const;

  /// d^alpha P / alpha!, via products of per-variable binomials.
  MultiPadicPoly partial_divided(const MultiIndex& alpha) const;
  /// Plain partial derivative d^alpha P.
  MultiPadicPoly partial(const MultiIndex& alpha) const;
  /// Coefficient of t^k in P(z + t u), as a polynomial in z.
  MultiPadicPoly directional_coefficient(const std::vector<Integer>& u, int k) const;
  /// g(t) = P(z + t u) at a fixed point z.
  PadicPoly restrict_line(const std::vector<Rational>& z, const std::vector<Rational>& u) const;

  Magnitude max_coeff_abs() const;
  unsigned long denominator_exponent() const;

  MultiPadicPoly scaled(const Rational& w) const;
  friend MultiPadicPoly operator+(const MultiPadicPoly& a, const MultiPadicPoly& b);
  friend MultiPadicPoly operator-(const MultiPadicPoly& a, const MultiPadicPoly& b);
  friend MultiPadicPoly operator*(const MultiPadicPoly& a, const MultiPadicPoly& b);
  friend bool operator==(const MultiPadicPoly& a, const MultiPadicPoly& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  Prime p_;
  int n_;
  std::map<MultiIndex, Rational> terms_;
};

/// All multi-indices with n entries and |alpha| == k, in lexicographic order.
std::vector<MultiIndex> multi_indices_of_degree(int n, int k);
/// All multi-indices with 1 <= |alpha| <= d.
std::vector<MultiIndex> multi_indices_up_to(int n, int d);

}  // namespace padicsum
