#include "sigmadep/parser.hpp"

#include <cctype>
#include <sstream>

#include "sigmadep/errors.hpp"

namespace sigmadep {

namespace {

constexpr long kMaxExponent = 100000;

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  FieldElement parse() {
    FieldElement r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::ostringstream msg;
    msg << "syntax error at position " << pos_ << ": expected " << expected;
    if (pos_ < text_.size()) msg << ", found '" << text_[pos_] << "'";
    throw ParseError(ErrorCode::syntax_error, msg.str(), pos_, expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FieldElement expr() {
    FieldElement acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  FieldElement term() {
    FieldElement acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        FieldElement d = unary();
        if (d.is_zero()) {
          throw ParseError(ErrorCode::zero_denominator, "division by zero expression", at);
        }
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  FieldElement unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  FieldElement power() {
    FieldElement base = primary();
    if (!accept('^')) return base;
    long e = exponent();
    if (e < 0 && base.is_zero()) {
      throw ParseError(ErrorCode::zero_denominator, "negative power of zero", pos_);
    }
    return base.pow(e);
  }

  long exponent() {
    bool paren = accept('(');
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("integer exponent");
    }
    BigInt v = integer_literal();
    if (v > kMaxExponent) fail("exponent of at most 100000");
    if (paren && !accept(')')) fail("')'");
    long e = v.get_si();
    return neg ? -e : e;
  }

  BigInt integer_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  FieldElement primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("number, variable or '('");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return FieldElement(BigRational(integer_literal()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return FieldElement::variable(static_cast<int>(i));
      }
      throw ParseError(ErrorCode::unknown_variable, "unknown variable: " + name, start, name);
    }
    if (accept('(')) {
      FieldElement inner = expr();
      if (!accept(')')) fail("')'");
      return inner;
    }
    fail("number, variable or '('");
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

std::vector<std::string> names_of(const TowerSpec& tower) {
  std::vector<std::string> names;
  for (const auto& v : tower.vars()) names.push_back(v.name);
  return names;
}

// Splits on commas at zero bracket depth.
std::vector<std::string> split_top(std::string_view text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unbracket(std::string_view s, std::string_view what) {
  std::string t = strip(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ParseError(ErrorCode::syntax_error, std::string("expected bracketed ") + std::string(what),
                     0, "'['");
  }
  return t.substr(1, t.size() - 2);
}

struct Term {
  BigRational coeff;
  std::vector<std::pair<int, std::size_t>> powers;  // descending variable index
};

void collect_terms(const Poly& p, std::vector<std::pair<int, std::size_t>>& prefix,
                   std::vector<Term>& out) {
  if (p.is_zero()) return;
  if (p.is_constant()) {
    out.push_back({p.constant(), prefix});
    return;
  }
  const auto& cs = p.coeffs();
  for (std::size_t i = cs.size(); i-- > 0;) {
    if (cs[i].is_zero()) continue;
    if (i > 0) prefix.emplace_back(p.main_var(), i);
    collect_terms(cs[i], prefix, out);
    if (i > 0) prefix.pop_back();
  }
}

std::string format_monomial(const std::vector<std::pair<int, std::size_t>>& powers,
                            const std::vector<std::string>& names) {
  std::string s;
  for (const auto& [v, e] : powers) {
    if (!s.empty()) s += "*";
    s += names.at(static_cast<std::size_t>(v));
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::size_t term_count(const Poly& p) {
  std::vector<std::pair<int, std::size_t>> prefix;
  std::vector<Term> terms;
  collect_terms(p, prefix, terms);
  return terms.size();
}

bool is_bare_power(const Poly& p) {
  std::vector<std::pair<int, std::size_t>> prefix;
  std::vector<Term> terms;
  collect_terms(p, prefix, terms);
  return terms.size() == 1 && terms[0].coeff == 1 && terms[0].powers.size() <= 1;
}

}  // namespace

std::string to_string(const BigRational& q) { return q.get_str(); }

FieldElement parse_expression(std::string_view text, const std::vector<std::string>& names) {
  return ExprParser(text, names).parse();
}

FieldElement parse_expression(std::string_view text, const TowerSpec& tower) {
  return parse_expression(text, names_of(tower));
}

std::vector<FieldElement> parse_list(std::string_view text, const TowerSpec& tower) {
  std::vector<FieldElement> out;
  for (const auto& part : split_top(text)) out.push_back(parse_expression(part, tower));
  return out;
}

std::vector<std::vector<FieldElement>> parse_matrix(std::string_view text, const TowerSpec& tower) {
  std::vector<std::vector<FieldElement>> rows;
  for (const auto& row : split_top(unbracket(text, "matrix"))) {
    rows.push_back(parse_list(unbracket(row, "matrix row"), tower));
  }
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw EngineError(ErrorCode::dimension_mismatch, "matrix rows have different lengths");
    }
  }
  return rows;
}

std::string format_poly(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<int, std::size_t>> prefix;
  std::vector<Term> terms;
  collect_terms(p, prefix, terms);
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    const bool neg = sgn(t.coeff) < 0;
    BigRational mag = abs(t.coeff);
    std::string mono = format_monomial(t.powers, names);
    std::string body;
    if (mono.empty()) {
      body = mag.get_str();
    } else if (mag == 1) {
      body = mono;
    } else {
      body = mag.get_str() + "*" + mono;
    }
    if (i == 0) {
      out = neg ? "-" + body : body;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

std::string to_string(const FieldElement& f, const std::vector<std::string>& names) {
  std::string num = format_poly(f.num(), names);
  if (f.den().is_one()) return num;
  if (term_count(f.num()) > 1) num = "(" + num + ")";
  std::string den = format_poly(f.den(), names);
  if (!is_bare_power(f.den())) den = "(" + den + ")";
  return num + "/" + den;
}

std::string to_string(const FieldElement& f, const TowerSpec& tower) {
  return to_string(f, names_of(tower));
}

VarDecl parse_var_decl(std::string_view text, const std::vector<VarDecl>& below) {
  VarDecl decl;
  const std::size_t colon = text.find(':');
  decl.name = strip(text.substr(0, colon));
  if (decl.name.empty() ||
      !(std::isalpha(static_cast<unsigned char>(decl.name[0])) || decl.name[0] == '_')) {
    throw ParseError(ErrorCode::syntax_error, "invalid variable name in declaration", 0, "identifier");
  }
  for (char c : decl.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      throw ParseError(ErrorCode::syntax_error, "invalid variable name in declaration", 0,
                       "identifier");
    }
  }
  if (colon == std::string_view::npos) return decl;
  std::vector<std::string> names;
  for (const auto& b : below) names.push_back(b.name);
  names.push_back(decl.name);
  const int v = static_cast<int>(below.size());
  const FieldElement x = FieldElement::variable(v);
  bool seen_phi = false;
  bool seen_sigma = false;
  for (const auto& part : split_top(text.substr(colon + 1))) {
    std::string item = strip(part);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError(ErrorCode::syntax_error, "expected phi=<expr> or sigma=<expr>", 0, "'='");
    }
    std::string key = strip(std::string_view(item).substr(0, eq));
    FieldElement img = parse_expression(std::string_view(item).substr(eq + 1), names);
    Action act;
    if (img == x) {
      act.kind = ActionKind::identity;
    } else if (FieldElement d = img - x; !d.contains(v)) {
      act = {ActionKind::shift, d};
    } else if (FieldElement r = img / x; !r.contains(v)) {
      act = {ActionKind::scale, r};
    } else {
      throw EngineError(ErrorCode::invalid_tower,
                        "action on " + decl.name + " is neither a shift nor a scaling");
    }
    if (key == "phi" && !seen_phi) {
      decl.phi = act;
      seen_phi = true;
    } else if (key == "sigma" && !seen_sigma) {
      decl.sigma = act;
      seen_sigma = true;
    } else {
      throw ParseError(ErrorCode::syntax_error, "unexpected action key: " + key, 0,
                       "phi or sigma");
    }
  }
  return decl;
}

TowerSpec parse_tower(const std::vector<std::string>& decls) {
  std::vector<VarDecl> vars;
  for (const auto& d : decls) vars.push_back(parse_var_decl(d, vars));
  return TowerSpec(std::move(vars));
}

std::string format_var_decl(const TowerSpec& tower, int v) {
  const VarDecl& d = tower.var(v);
  std::string out = d.name;
  const bool trivial = d.phi.kind == ActionKind::identity && d.sigma.kind == ActionKind::identity;
  if (trivial) return out;
  out += ": phi=" + to_string(tower.image(Endo::phi, v), tower) +
         ", sigma=" + to_string(tower.image(Endo::sigma, v), tower);
  return out;
}

}  // namespace sigmadep
