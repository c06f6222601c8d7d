#include "padicsum/polynomial.hpp"

#include <algorithm>
#include <numeric>

#include "padicsum/error.hpp"

namespace padicsum {

std::vector<Rational> divided_derivatives_at(const std::vector<Rational>& coeffs,
                                             const Rational& t) {
  std::vector<Rational> a = coeffs;
  const std::size_t n = a.size();
  if (n < 2 || t == 0) return a;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += t * a[j + 1];
  return a;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

Rational p_power(Prime p, long j) {
  if (j >= 0) return Rational(pow(p, static_cast<unsigned long>(j)));
  return Rational(Integer(1), pow(p, static_cast<unsigned long>(-j)));
}

}  // namespace

PadicPoly::PadicPoly(Prime p, std::vector<Rational> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c_[i].canonicalize();
    if (!has_p_power_denominator(c_[i], p_))
      throw ParseError("coefficient of x^" + std::to_string(i) + " (" +
                       padicsum::to_string(c_[i]) + ") has a denominator that is not a power of " +
                       std::to_string(p_.value()));
  }
  trim();
}

PadicPoly PadicPoly::monomial(Prime p, Rational c, unsigned k) {
  std::vector<Rational> coeffs(k + 1);
  coeffs[k] = std::move(c);
  return PadicPoly(p, std::move(coeffs));
}

void PadicPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational PadicPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

PadicScalar PadicPoly::eval(const PadicScalar& x) const { return PadicScalar((*this)(x.value()), p_); }

PadicPoly PadicPoly::divided_derivative(unsigned k) const {
  if (static_cast<int>(k) > degree()) return PadicPoly(p_);
  std::vector<Rational> out(c_.size() - k);
  for (std::size_t j = k; j < c_.size(); ++j) out[j - k] = Rational(binomial(j, k)) * c_[j];
  return PadicPoly(p_, std::move(out));
}

PadicPoly PadicPoly::derivative() const {
  if (degree() < 1) return PadicPoly(p_);
  std::vector<Rational> out(c_.size() - 1);
  for (std::size_t j = 1; j < c_.size(); ++j) out[j - 1] = Rational(static_cast<long>(j)) * c_[j];
  return PadicPoly(p_, std::move(out));
}

PadicPoly PadicPoly::taylor_shift(const Rational& t, long j) const {
  auto d = divided_derivatives(t);
  const Rational step = p_power(p_, j);
  Rational scale = 1;
  for (auto& coeff : d) {
    coeff *= scale;
    scale *= step;
  }
  return PadicPoly(p_, std::move(d));
}

Magnitude PadicPoly::max_coeff_abs() const {
  Magnitude m = Magnitude::zero();
  for (const auto& c : c_) m = max(m, Magnitude::of(c, p_));
  return m;
}

unsigned long PadicPoly::denominator_exponent() const {
  unsigned long e = 0;
  for (const auto& c : c_) {
    const auto v = ord_p(c, p_);
    if (!v.is_infinite() && v.value() < 0)
      e = std::max(e, static_cast<unsigned long>(-v.value()));
  }
  return e;
}

PadicPoly PadicPoly::scaled(const Rational& w) const {
  std::vector<Rational> out = c_;
  for (auto& c : out) c *= w;
  return PadicPoly(p_, std::move(out));
}

PadicPoly operator+(const PadicPoly& a, const PadicPoly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return PadicPoly(a.p_, std::move(out));
}

PadicPoly operator-(const PadicPoly& a, const PadicPoly& b) { return a + b.scaled(-1); }

PadicPoly operator*(const PadicPoly& a, const PadicPoly& b) {
  if (a.is_zero() || b.is_zero()) return PadicPoly(a.p_);
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return PadicPoly(a.p_, std::move(out));
}

namespace {

// One term "3x^2/5" with a leading sign handled by the caller.
std::string format_term(const Rational& c, const std::string& monomial, bool first) {
  std::string s;
  const bool negative = c < 0;
  if (first) {
    if (negative) s += "-";
  } else {
    s += negative ? " - " : " + ";
  }
  const Integer num = abs(c.get_num());
  const Integer& den = c.get_den();
  if (monomial.empty()) {
    s += num.get_str();
  } else {
    if (num != 1) s += num.get_str();
    s += monomial;
  }
  if (den != 1) s += "/" + den.get_str();
  return s;
}

}  // namespace

std::string PadicPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
    s += format_term(c_[i], mono, first);
    first = false;
  }
  return s;
}

int total_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

MultiPadicPoly::MultiPadicPoly(Prime p, int n, std::map<MultiIndex, Rational> terms)
    : p_(p), n_(n) {
  for (auto& [alpha, c] : terms) add_term(alpha, c);
}

int MultiPadicPoly::degree() const {
  int d = -1;
  for (const auto& [alpha, c] : terms_) d = std::max(d, total_degree(alpha));
  return d;
}

Rational MultiPadicPoly::coeff(const MultiIndex& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiPadicPoly::add_term(const MultiIndex& a, const Rational& c) {
  if (static_cast<int>(a.size()) != n_)
    throw PreconditionError("multi-index has " + std::to_string(a.size()) + " entries, expected " +
                            std::to_string(n_));
  for (int e : a)
    if (e < 0) throw PreconditionError("negative exponent in multi-index");
  Rational value = c;
  value.canonicalize();
  if (!has_p_power_denominator(value, p_))
    throw ParseError("coefficient " + padicsum::to_string(value) +
                     " has a denominator that is not a power of " + std::to_string(p_.value()));
  auto [it, inserted] = terms_.try_emplace(a, 0);
  it->second += value;
  if (it->second == 0) terms_.erase(it);
}

Rational MultiPadicPoly::operator()(const std::vector<Rational>& z) const {
  if (static_cast<int>(z.size()) != n_) throw PreconditionError("point has wrong dimension");
  Rational acc = 0;
  for (const auto& [alpha, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < alpha[i]; ++e) term *= z[i];
    acc += term;
  }
  return acc;
}

MultiPadicPoly MultiPadicPoly::partial_divided(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) throw PreconditionError("multi-index dimension mismatch");
  MultiPadicPoly out(p_, n_);
  for (const auto& [beta, c] : terms_) {
    bool ok = true;
    Integer factor = 1;
    MultiIndex rest(n_);
    for (int i = 0; i < n_ && ok; ++i) {
      if (beta[i] < alpha[i]) {
        ok = false;
        break;
      }
      factor *= binomial(beta[i], alpha[i]);
      rest[i] = beta[i] - alpha[i];
    }
    if (ok) out.add_term(rest, Rational(factor) * c);
  }
  return out;
}

MultiPadicPoly MultiPadicPoly::partial(const MultiIndex& alpha) const {
  Integer fact = 1;
  for (int a : alpha)
    for (int j = 2; j <= a; ++j) fact *= j;
  return partial_divided(alpha).scaled(Rational(fact));
}

MultiPadicPoly MultiPadicPoly::directional_coefficient(const std::vector<Integer>& u, int k) const {
  if (static_cast<int>(u.size()) != n_) throw PreconditionError("direction dimension mismatch");
  // P(z + t u) = sum_gamma (d^gamma P/gamma!)(z) (t u)^gamma; keep |gamma| = k.
  MultiPadicPoly out(p_, n_);
  for (const auto& gamma : multi_indices_of_degree(n_, k)) {
    Integer ug = 1;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < gamma[i]; ++e) ug *= u[i];
    if (ug == 0) continue;
    out = out + partial_divided(gamma).scaled(Rational(ug));
  }
  return out;
}

PadicPoly MultiPadicPoly::restrict_line(const std::vector<Rational>& z,
                                        const std::vector<Rational>& u) const {
  const int d = std::max(degree(), 0);
  // Substitute z_i + t u_i into each monomial, expanding in t.
  std::vector<Rational> g(d + 1);
  for (const auto& [alpha, c] : terms_) {
    std::vector<Rational> term{c};
    for (int i = 0; i < n_; ++i) {
      for (int e = 0; e < alpha[i]; ++e) {
        std::vector<Rational> next(term.size() + 1);
        for (std::size_t j = 0; j < term.size(); ++j) {
          next[j] += term[j] * z[i];
          next[j + 1] += term[j] * u[i];
        }
        term = std::move(next);
      }
    }
    for (std::size_t j = 0; j < term.size(); ++j) g[j] += term[j];
  }
  std::vector<Rational> kept;
  for (auto& c : g) kept.push_back(c);
  return PadicPoly(p_, std::move(kept));
}

Magnitude MultiPadicPoly::max_coeff_abs() const {
  Magnitude m = Magnitude::zero();
  for (const auto& [alpha, c] : terms_) m = max(m, Magnitude::of(c, p_));
  return m;
}

unsigned long MultiPadicPoly::denominator_exponent() const {
  unsigned long e = 0;
  for (const auto& [alpha, c] : terms_) {
    const auto v = ord_p(c, p_);
    if (v.value() < 0) e = std::max(e, static_cast<unsigned long>(-v.value()));
  }
  return e;
}

MultiPadicPoly MultiPadicPoly::scaled(const Rational& w) const {
  MultiPadicPoly out(p_, n_);
  if (w == 0) return out;
  for (const auto& [alpha, c] : terms_) out.add_term(alpha, c * w);
  return out;
}

MultiPadicPoly operator+(const MultiPadicPoly& a, const MultiPadicPoly& b) {
  if (a.n_ != b.n_) throw PreconditionError("adding polynomials in different numbers of variables");
  MultiPadicPoly out = a;
  for (const auto& [alpha, c] : b.terms_) out.add_term(alpha, c);
  return out;
}

MultiPadicPoly operator-(const MultiPadicPoly& a, const MultiPadicPoly& b) { return a + b.scaled(-1); }

MultiPadicPoly operator*(const MultiPadicPoly& a, const MultiPadicPoly& b) {
  if (a.n_ != b.n_) throw PreconditionError("multiplying polynomials in different numbers of variables");
  MultiPadicPoly out(a.p_, a.n_);
  for (const auto& [alpha, c] : a.terms_)
    for (const auto& [beta, d] : b.terms_) {
      MultiIndex sum(a.n_);
      for (int i = 0; i < a.n_; ++i) sum[i] = alpha[i] + beta[i];
      out.add_term(sum, c * d);
    }
  return out;
}

std::string MultiPadicPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [alpha, c] = *it;
    std::string mono;
    for (int i = 0; i < n_; ++i) {
      if (alpha[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "z" + std::to_string(i + 1);
      if (alpha[i] > 1) mono += "^" + std::to_string(alpha[i]);
    }
    s += format_term(c, mono, first);
    first = false;
  }
  return s;
}

namespace {

void indices_rec(int n, int remaining, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    indices_rec(n, remaining - e, cur, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_degree(int n, int k) {
  std::vector<MultiIndex> out;
  if (n < 1 || k < 0) return out;
  MultiIndex cur(n);
  indices_rec(n, k, cur, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int n, int d) {
  std::vector<MultiIndex> out;
  for (int k = 1; k <= d; ++k) {
    auto level = multi_indices_of_degree(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace padicsum
