#include "padicsum/multivar.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "padicsum/error.hpp"
#include "padicsum/functionals.hpp"
#include "padicsum/io.hpp"

namespace padicsum {

std::size_t form_dimension(int n, int k) {
  return binomial(static_cast<unsigned long>(n + k - 1), static_cast<unsigned long>(k)).get_ui();
}

namespace {

Integer factorial(int n) {
  Integer out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// Coefficients of (u . z)^k in the monomial order of `indices`: k!/beta! u^beta.
std::vector<Rational> power_form(const std::vector<Integer>& u, const std::vector<MultiIndex>& indices, int k) {
  std::vector<Rational> out;
  const Integer kf = factorial(k);
  for (const auto& beta : indices) {
    Integer c = kf;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      c /= factorial(beta[i]);
      for (int r = 0; r < beta[i]; ++r) c *= u[i];
    }
    out.emplace_back(c);
  }
  return out;
}

// Incremental row echelon form over Q.
class Span {
 public:
  explicit Span(std::size_t dim) : dim_(dim) {}
  std::size_t rank() const { return rows_.size(); }
  bool add(std::vector<Rational> v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t c = pivots_[r];
      if (v[c] == 0) continue;
      const Rational f = v[c] / rows_[r][c];
      for (std::size_t i = 0; i < dim_; ++i) v[i] -= f * rows_[r][i];
    }
    for (std::size_t c = 0; c < dim_; ++c)
      if (v[c] != 0) {
        rows_.push_back(std::move(v));
        pivots_.push_back(c);
        return true;
      }
    return false;
  }

 private:
  std::size_t dim_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

// Solves V X = I exactly, V square and invertible.
std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> V) {
  const std::size_t n = V.size();
  std::vector<std::vector<Rational>> X(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) X[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && V[piv][c] == 0) ++piv;
    if (piv == n) throw InternalError("directional power forms are linearly dependent");
    std::swap(V[piv], V[c]);
    std::swap(X[piv], X[c]);
    const Rational inv = 1 / V[c][c];
    for (std::size_t i = 0; i < n; ++i) {
      V[c][i] *= inv;
      X[c][i] *= inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || V[r][c] == 0) continue;
      const Rational f = V[r][c];
      for (std::size_t i = 0; i < n; ++i) {
        V[r][i] -= f * V[c][i];
        X[r][i] -= f * X[c][i];
      }
    }
  }
  return X;
}

// Integer vectors of max-norm h with an entry +-1 and positive leading entry, in search order.
std::vector<std::vector<Integer>> candidates(int n, long h) {
  std::vector<std::vector<long>> out;
  std::vector<long> v(n, -h);
  while (true) {
    long maxnorm = 0;
    bool unit = false;
    for (long x : v) {
      maxnorm = std::max(maxnorm, std::abs(x));
      unit = unit || std::abs(x) == 1;
    }
    const auto lead = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
    if (maxnorm == h && unit && lead != v.end() && *lead > 0) out.push_back(v);
    int i = n - 1;
    while (i >= 0 && v[i] == h) v[i--] = -h;
    if (i < 0) break;
    ++v[i];
  }
  const auto l1 = [](const std::vector<long>& x) {
    long s = 0;
    for (long e : x) s += std::abs(e);
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    if (l1(a) != l1(b)) return l1(a) < l1(b);
    return a > b;
  });
  std::vector<std::vector<Integer>> res;
  for (const auto& x : out) res.emplace_back(x.begin(), x.end());
  return res;
}

DirectionalBasis compute_basis(int n, int k) {
  DirectionalBasis b;
  b.n = n;
  b.k = k;
  b.indices = multi_indices_of_degree(n, k);
  std::sort(b.indices.begin(), b.indices.end());
  const std::size_t D = b.indices.size();
  Span span(D);
  std::vector<std::vector<Rational>> columns;
  for (long h = 1; b.vectors.size() < D; ++h) {
    for (auto& u : candidates(n, h)) {
      auto form = power_form(u, b.indices, k);
      if (span.add(form)) {
        b.vectors.push_back(u);
        columns.push_back(std::move(form));
        if (b.vectors.size() == D) break;
      }
    }
    if (h > 64) throw InternalError("basis search did not terminate");
  }
  // V[beta][j] = coefficient of z^beta in (u_j . z)^k; coeffs[alpha][j] = (V^-1)[j][alpha].
  std::vector<std::vector<Rational>> V(D, std::vector<Rational>(D));
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t r = 0; r < D; ++r) V[r][j] = columns[j][r];
  const auto X = inverse(V);
  b.coeffs.assign(D, std::vector<Rational>(D));
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t j = 0; j < D; ++j) b.coeffs[a][j] = X[j][a];
  return b;
}

void add_to(RationalTerms& t, const MultiIndex& e, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = t.emplace(e, c);
  if (!fresh && (it->second += c) == 0) t.erase(it);
}

}  // namespace

Magnitude DirectionalBasis::A(Prime p) const {
  Magnitude out;
  for (const auto& row : coeffs)
    for (const auto& c : row)
      if (c != 0) out = max(out, Magnitude::of(c, p));
  return out;
}

std::vector<unsigned long> DirectionalBasis::denominator_primes() const {
  std::vector<unsigned long> out;
  Integer den = 1;
  for (const auto& row : coeffs)
    for (const auto& c : row) den = lcm(den, Integer(c.get_den()));
  for (unsigned long q = 2; den > 1; ++q)
    if (den % q == 0) {
      out.push_back(q);
      while (den % q == 0) den /= q;
    }
  return out;
}

RationalTerms DirectionalBasis::expand(const MultiIndex& alpha) const {
  const auto it = std::find(indices.begin(), indices.end(), alpha);
  if (it == indices.end()) throw PreconditionError("multi-index is not of degree k");
  const std::size_t a = static_cast<std::size_t>(it - indices.begin());
  RationalTerms out;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const auto form = power_form(vectors[j], indices, k);
    for (std::size_t r = 0; r < indices.size(); ++r) add_to(out, indices[r], coeffs[a][j] * form[r]);
  }
  return out;
}

nlohmann::json DirectionalBasis::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["k"] = k;
  j["vectors"] = nlohmann::json::array();
  for (const auto& u : vectors) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : u) row.push_back(x.get_str());
    j["vectors"].push_back(row);
  }
  j["coeffs"] = nlohmann::json::object();
  for (std::size_t a = 0; a < indices.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : coeffs[a]) row.push_back(to_string(c));
    j["coeffs"][format_multi_index(indices[a])] = row;
  }
  return j;
}

DirectionalBasis DirectionalBasis::from_json(const nlohmann::json& j) {
  try {
    DirectionalBasis b;
    b.n = j.at("n").get<int>();
    b.k = j.at("k").get<int>();
    for (const auto& row : j.at("vectors")) {
      std::vector<Integer> u;
      for (const auto& x : row) u.emplace_back(x.get<std::string>());
      b.vectors.push_back(std::move(u));
    }
    b.indices = multi_indices_of_degree(b.n, b.k);
    std::sort(b.indices.begin(), b.indices.end());
    for (const auto& alpha : b.indices) {
      std::vector<Rational> row;
      for (const auto& c : j.at("coeffs").at(format_multi_index(alpha))) row.push_back(parse_rational(c.get<std::string>()));
      b.coeffs.push_back(std::move(row));
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("basis JSON: ") + e.what());
  }
}

const DirectionalBasis& build_basis(int n, int k) {
  if (n < 1 || k < 1) throw PreconditionError("basis needs n >= 1 and k >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<DirectionalBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_unique<DirectionalBasis>(compute_basis(n, k));
  return *slot;
}

PartialDecomposition decompose_partial(const MultiPadicPoly& P, const MultiIndex& alpha,
                                       const DirectionalBasis& basis) {
  if (P.num_vars() != basis.n || static_cast<int>(alpha.size()) != basis.n)
    throw PreconditionError("dimension mismatch between polynomial, index and basis");
  if (total_degree(alpha) != basis.k) throw PreconditionError("|alpha| differs from the basis degree");
  const auto it = std::find(basis.indices.begin(), basis.indices.end(), alpha);
  const std::size_t a = static_cast<std::size_t>(it - basis.indices.begin());
  PartialDecomposition out{false, P.partial(alpha), {}, {}};
  const Rational kf(factorial(basis.k));
  for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
    MultiPadicPoly d = P.directional_coefficient(basis.vectors[j], basis.k).scaled(kf);
    for (const auto& [e, c] : d.terms()) add_to(out.rhs, e, basis.coeffs[a][j] * c);
    out.directional.push_back(std::move(d));
  }
  out.equal = out.lhs.terms() == out.rhs;
  return out;
}

MultiInfimum h_inf_multi(const MultiPadicPoly& P, std::uint64_t budget) {
  const MultiFunctional F(P, Functional::H);
  MultiInfimum out;
  out.modulus = F.certified_modulus();
  const int n = P.num_vars();
  const Integer points = pow(P.prime(), static_cast<unsigned long>(out.modulus) * n);
  if (!points.fits_ulong_p() || points.get_ui() > budget)
    throw BudgetExceeded("H infimum mod p^" + std::to_string(out.modulus) + " in " + std::to_string(n) + " variables",
                         points.fits_ulong_p() ? points.get_ui() : ~0ULL, budget);
  const std::uint64_t M = pow(P.prime(), static_cast<unsigned long>(out.modulus)).get_ui();
  std::vector<std::uint64_t> digits(n, 0);
  std::vector<Integer> z(n, Integer(0));
  bool first = true;
  while (true) {
    const Magnitude here = F.at(z);
    ++out.points;
    if (first || here < out.value) {
      out.value = here;
      out.witness = z;
      first = false;
    }
    int i = n - 1;
    while (i >= 0 && digits[i] + 1 == M) {
      digits[i] = 0;
      z[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++digits[i];
    z[i] = digits[i];
  }
  return out;
}

}  // namespace padicsum
