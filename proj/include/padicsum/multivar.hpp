#pragma once

// Directional bases for homogeneous forms of degree k in n variables: integer
// vectors u_1..u_D, D = C(n+k-1, k), with the (u_j . z)^k linearly independent,
// and the coefficients c_j(alpha) of z^alpha = sum_j c_j(alpha) (u_j . z)^k.
// The same coefficients give d^alpha = sum_j c_j(alpha) (u_j . grad)^k.

#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "padicsum/expsum.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum {

/// Sparse polynomial over Q; the basis coefficients need not have p-power denominators.
using RationalTerms = std::map<MultiIndex, Rational>;

struct DirectionalBasis {
  int n = 1;
  int k = 1;
  /// Every vector has an entry equal to +-1 and a positive first nonzero entry.
  std::vector<std::vector<Integer>> vectors;
  /// All alpha with |alpha| = k, in lexicographic order.
  std::vector<MultiIndex> indices;
  /// coeffs[i][j] = c_j(indices[i]).
  std::vector<std::vector<Rational>> coeffs;

  /// max(1, max_{j, alpha} |c_j(alpha)|).
  Magnitude A(Prime p) const;
  /// Primes dividing some denominator of the c_j(alpha).
  std::vector<unsigned long> denominator_primes() const;
  /// sum_j c_j(alpha) (u_j . z)^k, expanded.
  RationalTerms expand(const MultiIndex& alpha) const;

  nlohmann::json to_json() const;
  static DirectionalBasis from_json(const nlohmann::json& j);
};

/// D = C(n+k-1, k).
std::size_t form_dimension(int n, int k);

/// Deterministic greedy search: candidates ordered by max-norm, then L1 norm,
/// then entries in descending lexicographic order; a candidate is kept when
/// (u . z)^k enlarges the span. Cached per (n, k); safe to call from several threads.
const DirectionalBasis& build_basis(int n, int k);

struct PartialDecomposition {
  bool equal = false;
  /// d^alpha P.
  MultiPadicPoly lhs;
  /// sum_j c_j(alpha) (u_j . grad)^k P.
  RationalTerms rhs;
  /// (u_j . grad)^k P = k! [t^k] P(z + t u_j).
  std::vector<MultiPadicPoly> directional;
};

/// Throws PreconditionError when |alpha| != basis.k or the variable counts differ.
PartialDecomposition decompose_partial(const MultiPadicPoly& P, const MultiIndex& alpha,
                                       const DirectionalBasis& basis);

struct MultiInfimum {
  Magnitude value = Magnitude::zero();
  std::vector<Integer> witness;
  /// Residues were enumerated mod p^modulus.
  long modulus = 0;
  std::uint64_t points = 0;
};

/// inf over Z_p^n of H_P(z) = max_{|alpha| >= 1} |d^alpha P(z)/alpha!|^(1/|alpha|), by
/// enumeration mod p^M with M the certified modulus. Throws BudgetExceeded
/// (stating M) when p^(nM) exceeds the budget.
MultiInfimum h_inf_multi(const MultiPadicPoly& P, std::uint64_t budget = kDefaultBudget);

}  // namespace padicsum
