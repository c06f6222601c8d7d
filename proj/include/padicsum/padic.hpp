#pragma once

// Exact p-adic valuations and absolute values over the rationals.
//
// Everything in this header is exact: valuations are integers (or +inf),
// absolute values are stored as rational exponents of p, and rationals are
// GMP rationals. No floating point is involved until `Magnitude::to_double`.

#include <gmpxx.h>

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace padicsum {

using Integer = mpz_class;
using Rational = mpq_class;
using Exponent = boost::rational<long long>;

/// A prime number, checked at construction.
class Prime {
 public:
  explicit Prime(long long p);

  unsigned long value() const noexcept { return value_; }
  operator unsigned long() const noexcept { return value_; }

  friend bool operator==(Prime a, Prime b) noexcept { return a.value_ == b.value_; }

 private:
  unsigned long value_;
};

bool is_prime(long long n);

/// p-adic valuation: an integer, or +inf for the valuation of zero.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(long long v) : value_(v) {}
  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; undefined for +inf.
  constexpr long long value() const noexcept { return value_; }

  friend Valuation operator+(Valuation a, Valuation b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Valuation(a.value_ + b.value_);
  }

  friend constexpr bool operator==(Valuation a, Valuation b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Valuation a, Valuation b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  long long value_ = 0;
  bool infinite_ = false;
};

Valuation ord_p(const Integer& x, Prime p);
Valuation ord_p(const Rational& x, Prime p);

/// A p-adic absolute value p^q with q rational, or the absolute value of zero.
///
/// The prime is implicit; only comparisons between magnitudes for the same
/// prime are meaningful.
class Magnitude {
 public:
  /// |.| = 1.
  Magnitude() : exponent_(Exponent(0)) {}
  static Magnitude zero() { return Magnitude(std::nullopt); }
  static Magnitude power(Exponent q) { return Magnitude(std::optional<Exponent>(q)); }
  static Magnitude power(long long q) { return power(Exponent(q)); }
  static Magnitude of(const Rational& x, Prime p);
  static Magnitude of(const Integer& x, Prime p);

  bool is_zero() const noexcept { return !exponent_.has_value(); }
  /// log_p of the value; only for nonzero magnitudes.
  const Exponent& exponent() const;

  /// k-th root: divides the exponent by k exactly.
  Magnitude root(long long k) const;
  Magnitude pow(long long k) const;
  /// Reciprocal of a nonzero magnitude.
  Magnitude inverse() const;

  friend Magnitude operator*(const Magnitude& a, const Magnitude& b);
  friend Magnitude operator/(const Magnitude& a, const Magnitude& b);

  friend bool operator==(const Magnitude& a, const Magnitude& b) noexcept {
    return a.exponent_ == b.exponent_;
  }
  friend std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b) noexcept;

  /// The valuation -q is an integer (zero counts as integral).
  bool has_integral_valuation() const;

  double to_double(Prime p) const;
  long double to_long_double(Prime p) const;
  /// "0", "1", "p^2", "p^(3/2)", "p^(-1/2)".
  std::string to_string() const;
  /// Level exponent "3/2", "-1", or "-inf" for zero.
  std::string exponent_string() const;

 private:
  explicit Magnitude(std::optional<Exponent> e) : exponent_(e) {}
  std::optional<Exponent> exponent_;
};

std::strong_ordering mag_compare(const Magnitude& a, const Magnitude& b);
Magnitude mag_root(const Magnitude& m, long long k);
inline Magnitude max(const Magnitude& a, const Magnitude& b) { return a < b ? b : a; }
inline Magnitude min(const Magnitude& a, const Magnitude& b) { return a < b ? a : b; }

/// Smallest integer >= q.
long long ceil(const Exponent& q);
/// Largest integer <= q.
long long floor(const Exponent& q);

Integer pow(Prime p, unsigned long k);

/// The denominator of x is a power of p.
bool has_p_power_denominator(const Rational& x, Prime p);

/// A rational with p-power denominator, i.e. an element of Q cap Z[1/p].
class PadicScalar {
 public:
  PadicScalar(Rational value, Prime p);

  const Rational& value() const noexcept { return value_; }
  Prime prime() const noexcept { return p_; }
  Valuation ord() const { return ord_p(value_, p_); }
  Magnitude abs() const { return Magnitude::of(value_, p_); }
  bool in_Zp() const { return value_.get_den() == 1; }
  /// Integer a with value = a * p^-N; requires ord >= -N.
  Integer scaled_numerator(unsigned long N) const;

 private:
  Rational value_;
  Prime p_;
};

/// x mod p^N for x in Z_(p) (denominator prime to p), as an integer in [0, p^N).
Integer residue(const Rational& x, Prime p, unsigned long N);

/// Fractional part L(x) in [0,1) for x with p-power denominator, so that the
/// additive character is e(x) = exp(2 pi i L(x)).
Rational fractional_part(const Rational& x, Prime p);

/// "a/b" or "a".
std::string to_string(const Rational& x);
/// Parses "a/b" or "a" (optional sign, decimal integers).
Rational parse_rational(const std::string& text);

}  // namespace padicsum
