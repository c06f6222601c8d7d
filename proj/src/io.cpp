#include "padicsum/io.hpp"

#include <cctype>

#include "padicsum/error.hpp"

namespace padicsum {

namespace {

class TextParser {
 public:
  explicit TextParser(const std::string& text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  std::vector<Rational> parse() {
    if (s_.empty()) throw ParseError("empty polynomial text");
    std::vector<Rational> coeffs;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [c, k] = term();
      if (coeffs.size() <= k) coeffs.resize(k + 1);
      coeffs[k] += sign * c;
    }
    return coeffs;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial text '" + s_ + "' at position " + std::to_string(pos_) + ": " +
                     what);
  }

  Integer integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(s_.substr(start, pos_ - start));
  }

  static bool is_var(char c) { return c == 'x' || c == 'z' || c == 't'; }

  std::pair<Rational, std::size_t> term() {
    Rational c = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = Rational(integer());
      have_coeff = true;
      if (peek() == '/' && !is_var(peek_at(1))) {
        ++pos_;
        c /= Rational(nonzero(integer()));
      }
    }
    std::size_t k = 0;
    if (peek() == '*') {
      if (!have_coeff) fail("dangling '*'");
      ++pos_;
      if (!is_var(peek())) fail("expected a variable after '*'");
    }
    if (is_var(peek())) {
      ++pos_;
      k = 1;
      if (peek() == '^') {
        ++pos_;
        const Integer e = integer();
        if (!e.fits_ulong_p() || e > 4096) fail("exponent too large");
        k = e.get_ui();
      }
      if (peek() == '/') {
        ++pos_;
        c /= Rational(nonzero(integer()));
      }
    } else if (!have_coeff) {
      fail("expected a coefficient or a variable");
    }
    c.canonicalize();
    return {c, k};
  }

  char peek_at(std::size_t off) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }

  Integer nonzero(Integer v) const {
    if (v == 0) fail("division by zero");
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

Rational rational_from_json(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  throw ParseError("coefficient must be a rational string or an integer");
}

Prime prime_from_json(const Json& j) {
  if (!j.contains("p") || !j["p"].is_number_integer()) throw ParseError("missing integer field \"p\"");
  try {
    return Prime(j["p"].get<long long>());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

PadicPoly parse_poly_text(const std::string& text, Prime p) {
  return PadicPoly(p, TextParser(text).parse());
}

PadicPoly poly_from_json(const Json& j) {
  const Prime p = prime_from_json(j);
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw ParseError("missing array \"coeffs\"");
  std::vector<Rational> coeffs;
  for (const auto& v : j["coeffs"]) coeffs.push_back(rational_from_json(v));
  return PadicPoly(p, std::move(coeffs));
}

Json to_json(const PadicPoly& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_string(c));
  return Json{{"p", f.prime().value()}, {"coeffs", coeffs}};
}

std::string format_multi_index(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

MultiIndex parse_multi_index(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 3 || s.front() != '(' || s.back() != ')')
    throw ParseError("malformed multi-index '" + text + "'");
  MultiIndex out;
  std::size_t pos = 1;
  while (pos < s.size() - 1) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size() - 1;
    const std::string part = s.substr(pos, end - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 4)
      throw ParseError("malformed multi-index entry in '" + text + "'");
    out.push_back(std::stoi(part));
    pos = end + 1;
  }
  return out;
}

MultiPadicPoly multi_poly_from_json(const Json& j) {
  const Prime p = prime_from_json(j);
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1)
    throw ParseError("missing positive integer field \"n\"");
  const int n = j["n"].get<int>();
  if (!j.contains("terms") || !j["terms"].is_object()) throw ParseError("missing object \"terms\"");
  MultiPadicPoly out(p, n);
  for (const auto& [key, value] : j["terms"].items()) {
    const MultiIndex alpha = parse_multi_index(key);
    if (static_cast<int>(alpha.size()) != n)
      throw ParseError("multi-index " + key + " does not have " + std::to_string(n) + " entries");
    const Rational c = rational_from_json(value);
    if (!has_p_power_denominator(c, p))
      throw ParseError("coefficient of " + key + " (" + to_string(c) +
                       ") has a denominator that is not a power of " + std::to_string(p.value()));
    out.add_term(alpha, c);
  }
  return out;
}

Json to_json(const MultiPadicPoly& f) {
  Json terms = Json::object();
  for (const auto& [alpha, c] : f.terms()) terms[format_multi_index(alpha)] = to_string(c);
  return Json{{"p", f.prime().value()}, {"n", f.num_vars()}, {"terms", terms}};
}

std::variant<PadicPoly, MultiPadicPoly> parse_poly(const std::string& input, std::optional<Prime> p) {
  const auto first = input.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && input[first] == '{') {
    Json j;
    try {
      j = Json::parse(input);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const Prime jp = prime_from_json(j);
    if (p && !(*p == jp)) throw ParseError("prime in JSON does not match the requested prime");
    if (j.contains("terms")) return multi_poly_from_json(j);
    return poly_from_json(j);
  }
  if (!p) throw ParseError("a prime is required for the text polynomial form");
  return parse_poly_text(input, *p);
}

}  // namespace padicsum
