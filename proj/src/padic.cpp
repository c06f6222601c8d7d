#include "padicsum/padic.hpp"

#include <cmath>
#include <stdexcept>

#include "padicsum/error.hpp"

namespace padicsum {

bool is_prime(long long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long long d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

Prime::Prime(long long p) : value_(static_cast<unsigned long>(p)) {
  if (!is_prime(p)) throw PreconditionError("not a prime: " + std::to_string(p));
}

std::string Valuation::to_string() const {
  return infinite_ ? "+inf" : std::to_string(value_);
}

Valuation ord_p(const Integer& x, Prime p) {
  if (x == 0) return Valuation::infinity();
  Integer rest;
  Integer prime = p.value();
  const auto count = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t());
  return Valuation(static_cast<long long>(count));
}

Valuation ord_p(const Rational& x, Prime p) {
  if (x == 0) return Valuation::infinity();
  return Valuation(ord_p(Integer(x.get_num()), p).value() -
                   ord_p(Integer(x.get_den()), p).value());
}

Magnitude Magnitude::of(const Rational& x, Prime p) {
  const auto v = ord_p(x, p);
  if (v.is_infinite()) return zero();
  return power(-v.value());
}

Magnitude Magnitude::of(const Integer& x, Prime p) {
  const auto v = ord_p(x, p);
  if (v.is_infinite()) return zero();
  return power(-v.value());
}

const Exponent& Magnitude::exponent() const {
  if (!exponent_) throw PreconditionError("exponent of the zero magnitude");
  return *exponent_;
}

Magnitude Magnitude::root(long long k) const {
  if (k < 1) throw PreconditionError("root index must be positive");
  if (is_zero()) return zero();
  return power(*exponent_ / k);
}

Magnitude Magnitude::pow(long long k) const {
  if (is_zero()) return k == 0 ? Magnitude() : zero();
  return power(*exponent_ * k);
}

Magnitude Magnitude::inverse() const {
  if (is_zero()) throw PreconditionError("inverse of the zero magnitude");
  return power(-*exponent_);
}

Magnitude operator*(const Magnitude& a, const Magnitude& b) {
  if (a.is_zero() || b.is_zero()) return Magnitude::zero();
  return Magnitude::power(*a.exponent_ + *b.exponent_);
}

Magnitude operator/(const Magnitude& a, const Magnitude& b) { return a * b.inverse(); }

std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b) noexcept {
  if (a.is_zero() || b.is_zero()) return (!a.is_zero()) <=> (!b.is_zero());
  if (*a.exponent_ < *b.exponent_) return std::strong_ordering::less;
  if (*b.exponent_ < *a.exponent_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Magnitude::has_integral_valuation() const {
  return is_zero() || exponent_->denominator() == 1;
}

double Magnitude::to_double(Prime p) const {
  return static_cast<double>(to_long_double(p));
}

long double Magnitude::to_long_double(Prime p) const {
  if (is_zero()) return 0.0L;
  const long double q = static_cast<long double>(exponent_->numerator()) /
                        static_cast<long double>(exponent_->denominator());
  return std::pow(static_cast<long double>(p.value()), q);
}

std::string Magnitude::exponent_string() const {
  if (is_zero()) return "-inf";
  std::string s = std::to_string(exponent_->numerator());
  if (exponent_->denominator() != 1) s += "/" + std::to_string(exponent_->denominator());
  return s;
}

std::string Magnitude::to_string() const {
  if (is_zero()) return "0";
  if (exponent_->numerator() == 0) return "1";
  if (exponent_->denominator() == 1 && exponent_->numerator() > 0)
    return "p^" + exponent_string();
  return "p^(" + exponent_string() + ")";
}

std::strong_ordering mag_compare(const Magnitude& a, const Magnitude& b) { return a <=> b; }
Magnitude mag_root(const Magnitude& m, long long k) { return m.root(k); }

long long ceil(const Exponent& q) {
  const long long n = q.numerator(), d = q.denominator();
  return n >= 0 ? (n + d - 1) / d : -((-n) / d);
}

long long floor(const Exponent& q) {
  const long long n = q.numerator(), d = q.denominator();
  return n >= 0 ? n / d : -((-n + d - 1) / d);
}

Integer pow(Prime p, unsigned long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p.value(), k);
  return r;
}

bool has_p_power_denominator(const Rational& x, Prime p) {
  Integer rest;
  Integer prime = p.value();
  mpz_remove(rest.get_mpz_t(), x.get_den_mpz_t(), prime.get_mpz_t());
  return rest == 1;
}

PadicScalar::PadicScalar(Rational value, Prime p) : value_(std::move(value)), p_(p) {
  value_.canonicalize();
  if (!has_p_power_denominator(value_, p_))
    throw ParseError("denominator of " + padicsum::to_string(value_) + " is not a power of " +
                     std::to_string(p_.value()));
}

Integer PadicScalar::scaled_numerator(unsigned long N) const {
  const auto v = ord();
  if (!v.is_infinite() && v.value() < -static_cast<long long>(N))
    throw PreconditionError("scalar not representable at scale p^-" + std::to_string(N));
  Rational scaled = value_ * Rational(pow(p_, N));
  return scaled.get_num();
}

Integer residue(const Rational& x, Prime p, unsigned long N) {
  const Integer modulus = pow(p, N);
  Integer num = x.get_num() % modulus;
  if (num < 0) num += modulus;
  if (x.get_den() == 1) return num;
  Integer inv;
  Integer den = x.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw PreconditionError("residue of a non-integral rational " + to_string(x));
  Integer r = (num * inv) % modulus;
  if (r < 0) r += modulus;
  return r;
}

Rational fractional_part(const Rational& x, Prime p) {
  if (!has_p_power_denominator(x, p))
    throw PreconditionError("character of a rational outside Z[1/p]");
  const Integer& den = x.get_den();
  Integer num = x.get_num() % den;
  if (num < 0) num += den;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  const auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational '" + text + "'");
  Integer n(num[0] == '+' ? num.substr(1) : num);
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace padicsum
