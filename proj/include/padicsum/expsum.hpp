#pragma once

// Complete exponential sums S_m(f) = p^-m sum_{x mod p^m} e^{2 pi i f(x)/p^m}, sums over
// Z/pZ, and local integrals I_P(H) = int_{H <= H_P(z)} e(P(z)) dz.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "padicsum/functionals.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum {

using Real = __float128;

struct Complex {
  Real re = 0;
  Real im = 0;

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, Real s) { return {a.re * s, a.im * s}; }
  Real abs() const;
};

/// e^{2 pi i t/M} for 0 <= t < M.
Complex root_of_unity(std::uint64_t t, std::uint64_t M);
/// e(x) = e^{2 pi i L(x)} for x with p-power denominator.
Complex character(const Rational& x, Prime p);

/// Default cap on the number of enumerated points.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 22;

struct SumValue {
  Complex value;
  /// Absolute error bound on value.
  double err = 0;
  /// counts[t] = #{x : f(x) = t mod modulus}, when kept.
  std::optional<std::vector<std::uint64_t>> histogram;
  std::uint64_t modulus = 1;

  double re() const { return static_cast<double>(value.re); }
  double im() const { return static_cast<double>(value.im); }
  double abs() const { return static_cast<double>(value.abs()); }
};

/// {re, im, abs, err}.
nlohmann::json to_json(const SumValue& s);
/// Raw little-endian uint64 counts, preceded by the modulus.
void write_histogram(const SumValue& s, std::ostream& out);
std::vector<std::uint64_t> read_histogram(std::istream& in, std::uint64_t& modulus);

/// (sum_t counts[t] e^{2 pi i t/M}) / (sum_t counts[t]) with M = counts.size().
SumValue sum_from_histogram(std::vector<std::uint64_t> counts, bool keep = true);

/// S_m(f) for f with integer coefficients, via an exact histogram of f(x) mod p^m.
/// Throws BudgetExceeded when p^m > budget.
SumValue complete_sum(const PadicPoly& f, unsigned m, std::uint64_t budget = kDefaultBudget,
                      bool keep_histogram = true);
/// Same sum accumulated term by term, without a histogram.
Complex direct_sum(const PadicPoly& f, unsigned m, std::uint64_t budget = kDefaultBudget);

/// I_P over Z_p for P with p-power denominators, by enumeration mod p^c
/// where p^c clears the denominators.
SumValue full_integral(const PadicPoly& P, std::uint64_t budget = kDefaultBudget);

struct FiniteFieldSum {
  /// sum_{t mod p} e^{2 pi i Q(t)/p}, unnormalized.
  SumValue value;
  /// (d-1) sqrt(p), set when p > d and Q is nonconstant mod p.
  std::optional<double> weil_bound;
  bool weil_holds = true;
};

/// Q with integer coefficients, read mod p.
FiniteFieldSum finite_field_sum(const PadicPoly& Q);

/// I_P(H) from the certified ball decomposition of {H <= H_P}.
SumValue local_integral(const PadicPoly& P, const Magnitude& H);

struct StructuredOptions {
  /// Balls deeper than this are summed by brute force and flagged.
  long max_depth = 64;
  /// When set, evaluates I_P(threshold) instead of I_P.
  std::optional<Magnitude> threshold;
  std::uint64_t budget = kDefaultBudget;
};

struct StructuredResult {
  int epsilon = 0;
  /// p^s = H_P(z_*) when epsilon = 1.
  long s = 0;
  /// Reduced polynomial of the main base case, coefficients in [0, p).
  std::vector<Integer> Q;
  Rational z_star;
  /// epsilon p^-s e(P(t)) sum_{x mod p} e(Q(x)/p).
  Complex main_term;
  /// value - main_term.
  Complex residual;

  SumValue total;
  std::size_t residues_visited = 0;
  std::size_t balls_visited = 0;
  std::size_t balls_vanished = 0;
  std::size_t balls_constant = 0;
  std::size_t base_cases = 0;
  std::size_t fallbacks = 0;
  bool p_exceeds_degree = true;
};

/// I_P by ball subdivision. A ball B(t, p^-j) with J_P(t) <= p^j contributes
/// p^-j e(P(t)) when |P'(t)| <= p^j and zero otherwise. A ball on which every
/// Taylor term beyond the constant has size <= p reduces to one sum over Z/pZ.
StructuredResult structured_eval(const PadicPoly& P, const StructuredOptions& opt = {});

/// p^-nm sum_{z mod p^m} e(P(z)); the denominators of P must divide p^m.
SumValue multi_sum(const MultiPadicPoly& P, unsigned m, std::uint64_t budget = kDefaultBudget);
/// Same value as nested loops with the coordinates in reverse order.
Complex multi_sum_direct(const MultiPadicPoly& P, unsigned m, std::uint64_t budget = kDefaultBudget);

/// I_P(H) over Z_p^n by enumeration mod p^c, c the denominator exponent.
SumValue multi_local_integral(const MultiPadicPoly& P, const Magnitude& H,
                              std::uint64_t budget = kDefaultBudget);

}  // namespace padicsum
