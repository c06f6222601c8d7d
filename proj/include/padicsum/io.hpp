#pragma once

// Text and JSON forms of polynomials.
//
//   univariate:   {"p": 5, "coeffs": ["0", "1", "0", "1/5"]}   or   "x^3/5 + x"
//   multivariate: {"p": 3, "n": 2, "terms": {"(2,0)": "1", "(0,2)": "1"}}

#include <json.hpp>
#include <optional>
#include <string>
#include <variant>

#include "padicsum/polynomial.hpp"

namespace padicsum {

using Json = nlohmann::json;

/// Parses the human form: terms like "3x^2/5", "-x", "7/25", joined by + or -.
PadicPoly parse_poly_text(const std::string& text, Prime p);

PadicPoly poly_from_json(const Json& j);
Json to_json(const PadicPoly& f);

MultiPadicPoly multi_poly_from_json(const Json& j);
Json to_json(const MultiPadicPoly& f);

/// Accepts either JSON (univariate or multivariate) or the univariate text form;
/// `p` is required for the text form and must match the JSON prime if given.
std::variant<PadicPoly, MultiPadicPoly> parse_poly(const std::string& input,
                                                   std::optional<Prime> p = std::nullopt);

/// "(a1,...,an)".
std::string format_multi_index(const MultiIndex& a);
MultiIndex parse_multi_index(const std::string& text);

}  // namespace padicsum
