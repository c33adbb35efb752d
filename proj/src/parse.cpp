#include "puiseux/parse.hpp"

#include <cctype>
#include <map>

namespace puiseux {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

/// Finite sum of c x^nu y^sigma keyed by (sigma, nu).
using GPoly = std::map<std::pair<Exponent, Exponent>, Rational>;

struct Frac {
  GPoly num;
  GPoly den{{{Rational(0), Rational(0)}, Rational(1)}};
};

void add_term(GPoly& p, const std::pair<Exponent, Exponent>& k, const Rational& c) {
  Rational& slot = p[k];
  slot += c;
  if (slot == 0) p.erase(k);
}

GPoly gadd(const GPoly& a, const GPoly& b, int sign = 1) {
  GPoly r = a;
  for (const auto& [k, c] : b) add_term(r, k, sign == 1 ? c : Rational(-c));
  return r;
}

GPoly gmul(const GPoly& a, const GPoly& b) {
  GPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) add_term(r, {ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return r;
}

bool monomial(const GPoly& p) { return p.size() == 1; }

/// c x^nu y^sigma raised to a rational power; c must have an exact root.
std::optional<GPoly> monomial_power(const GPoly& p, const Rational& e) {
  const auto& [k, c] = *p.begin();
  Rational coef;
  if (is_integer(e)) {
    coef = pow(c, e.get_num().get_si());
  } else {
    auto root = exact_root(c, e.get_den().get_ui());
    if (!root || *root <= 0) return std::nullopt;
    coef = pow(*root, e.get_num().get_si());
  }
  return GPoly{{{k.first * e, k.second * e}, coef}};
}

GPoly gpow(const GPoly& p, long n) {
  GPoly r{{{Rational(0), Rational(0)}, Rational(1)}};
  for (long i = 0; i < n; ++i) r = gmul(r, p);
  return r;
}

Frac normalize(Frac f) {
  if (f.num.empty()) return Frac{};
  if (monomial(f.den) && !(f.den.begin()->first == std::pair<Exponent, Exponent>{Rational(0), Rational(0)} &&
                           f.den.begin()->second == 1)) {
    GPoly inv = *monomial_power(f.den, Rational(-1));
    f.num = gmul(f.num, inv);
    f.den = GPoly{{{Rational(0), Rational(0)}, Rational(1)}};
  }
  return f;
}

struct Token {
  enum Kind { number, ident, op, end } kind = end;
  std::string text;
  int line = 1;
  int column = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) { advance(); }

  [[noreturn]] void fail(const std::string& what, const Token& at) const { throw ParseError(what, at.line, at.column); }
  [[noreturn]] void fail(const std::string& what) const { fail(what, tok_); }

  const Token& peek() const { return tok_; }
  bool at_op(char c) const { return tok_.kind == Token::op && tok_.text[0] == c; }
  bool at_end() const { return tok_.kind == Token::end; }

  void expect_op(char c) {
    if (!at_op(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  /// Consumes a literal `dy/dx` if present.
  bool derivative_prefix() {
    std::size_t save = pos_;
    int line = line_, col = col_;
    Token t = tok_;
    if (tok_.kind == Token::ident && tok_.text == "dy") {
      advance();
      if (at_op('/')) {
        advance();
        if (tok_.kind == Token::ident && tok_.text == "dx") {
          advance();
          return true;
        }
      }
    }
    pos_ = save;
    line_ = line;
    col_ = col;
    tok_ = t;
    return false;
  }

  Frac expr() {
    Frac r = term();
    for (;;) {
      if (at_op('+') || at_op('-')) {
        int sign = at_op('+') ? 1 : -1;
        advance();
        Frac b = term();
        if (r.den == b.den) r = normalize({gadd(r.num, b.num, sign), r.den});
        else r = normalize({gadd(gmul(r.num, b.den), gmul(b.num, r.den), sign), gmul(r.den, b.den)});
      } else {
        return r;
      }
    }
  }

  void advance() {
    skip();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= s_.size()) return;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) step();
      if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
        fail("non-rational literal (use p/q)", tok_);
      tok_.kind = Token::number;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) step();
      tok_.kind = Token::ident;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::string("+-*/^()=;").find(c) != std::string::npos) {
      tok_.kind = Token::op;
      tok_.text = std::string(1, c);
      step();
      return;
    }
    fail(std::string("unexpected character '") + c + "'", tok_);
  }

 private:
  void step() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) step();
  }

  Frac term() {
    Frac r = unary();
    for (;;) {
      if (at_op('*')) {
        advance();
        Frac b = unary();
        r = normalize({gmul(r.num, b.num), gmul(r.den, b.den)});
      } else if (at_op('/')) {
        Token at = tok_;
        advance();
        Frac b = unary();
        if (b.num.empty()) fail("division by zero", at);
        r = normalize({gmul(r.num, b.den), gmul(r.den, b.num)});
      } else {
        return r;
      }
    }
  }

  Frac unary() {
    if (at_op('-')) {
      advance();
      Frac r = unary();
      return {gadd({}, r.num, -1), r.den};
    }
    if (at_op('+')) {
      advance();
      return unary();
    }
    return power();
  }

  long integer_token() {
    if (tok_.kind != Token::number) fail("non-rational exponent literal");
    long v = std::stol(tok_.text);
    advance();
    return v;
  }

  Rational exponent() {
    if (at_op('(')) {
      advance();
      bool neg = false;
      if (at_op('-')) {
        neg = true;
        advance();
      }
      Rational e(integer_token());
      if (at_op('/')) {
        advance();
        Token at = tok_;
        long d = integer_token();
        if (d == 0) fail("zero denominator in exponent", at);
        e /= d;
      }
      if (!at_op(')')) fail("non-rational exponent literal");
      advance();
      return neg ? Rational(-e) : e;
    }
    bool neg = false;
    if (at_op('-')) {
      neg = true;
      advance();
    }
    Rational e(integer_token());
    return neg ? Rational(-e) : e;
  }

  Frac power() {
    Frac base = atom();
    if (!at_op('^')) return base;
    Token at = tok_;
    advance();
    Rational e = exponent();
    if (base.num.empty()) {
      if (e <= 0) fail("nonpositive power of zero", at);
      return base;
    }
    if (monomial(base.num) && monomial(base.den)) {
      auto n = monomial_power(base.num, e);
      auto d = monomial_power(base.den, e);
      if (!n || !d) fail("fractional power of a coefficient without a rational root", at);
      return normalize({*n, *d});
    }
    if (!is_integer(e)) fail("fractional power of a sum", at);
    long n = e.get_num().get_si();
    if (n >= 0) return normalize({gpow(base.num, n), gpow(base.den, n)});
    return normalize({gpow(base.den, -n), gpow(base.num, -n)});
  }

  Frac atom() {
    Token t = tok_;
    if (t.kind == Token::number) {
      advance();
      Rational v{mpz_class(t.text)};
      Frac f;
      if (v != 0) f.num[{Rational(0), Rational(0)}] = v;
      return f;
    }
    if (t.kind == Token::ident && (t.text == "x" || t.text == "y")) {
      advance();
      Frac f;
      f.num[t.text == "y" ? std::pair{Rational(1), Rational(0)} : std::pair{Rational(0), Rational(1)}] = 1;
      return f;
    }
    if (t.kind == Token::ident) fail("unknown symbol '" + t.text + "'", t);
    if (at_op('(')) {
      advance();
      Frac r = expr();
      expect_op(')');
      return r;
    }
    if (t.kind == Token::end) fail("unexpected end of input", t);
    fail("unexpected '" + t.text + "'", t);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

bool y_free(const GPoly& p) {
  for (const auto& [k, c] : p)
    if (k.first != 0) return false;
  return true;
}

/// Coefficient series of y^sigma, grouped.
std::map<Exponent, PuiseuxSeries> by_sigma(const GPoly& p) {
  std::map<Exponent, PuiseuxSeries::TermMap> terms;
  for (const auto& [k, c] : p) terms[k.first][k.second] = Coefficient(c);
  std::map<Exponent, PuiseuxSeries> out;
  for (auto& [s, t] : terms) out.emplace(s, PuiseuxSeries(std::move(t), Valuation::infinity()));
  return out;
}

/// Shift making every y power natural; fails on fractional powers.
long natural_shift(const std::vector<const GPoly*>& polys, Parser& ps, const Token& at) {
  long shift = 0;
  for (const GPoly* p : polys)
    for (const auto& [k, c] : *p) {
      if (!is_integer(k.first)) ps.fail("fractional power of y in a rational right-hand side", at);
      shift = std::max(shift, -k.first.get_num().get_si());
    }
  return shift;
}

std::vector<PuiseuxSeries> dense(const GPoly& p, long shift) {
  std::vector<PuiseuxSeries> out;
  for (const auto& [s, series] : by_sigma(p)) {
    auto i = static_cast<std::size_t>(s.get_num().get_si() + shift);
    if (out.size() <= i) out.resize(i + 1);
    out[i] = series;
  }
  return out;
}

YPolynomial field_poly(const GPoly& p, long shift, Parser& ps, const Token& at) {
  YPolynomial out;
  for (const auto& [k, c] : p) {
    if (!is_integer(k.second)) ps.fail("fractional power of x is outside Q(x)", at);
    auto i = static_cast<std::size_t>(k.first.get_num().get_si() + shift);
    if (out.size() <= i) out.resize(i + 1);
    out[i] += RationalFunction(c) * RationalFunction::variable().pow(k.second.get_num().get_si());
  }
  return out;
}

Frac parse_side(Parser& ps) { return ps.expr(); }

std::variant<MonomialODE, RationalODE> ode_from(const Frac& rhs, Parser& ps, const Token& at) {
  if (rhs.den == Frac{}.den) {
    std::vector<Monomial> m;
    for (const auto& [k, c] : rhs.num) m.push_back({k.second, k.first, c});
    return MonomialODE(std::move(m));
  }
  long shift = natural_shift({&rhs.num, &rhs.den}, ps, at);
  RationalODE r;
  r.p = dense(rhs.num, shift);
  r.q = dense(rhs.den, shift);
  return r;
}

}  // namespace

std::variant<MonomialODE, RationalODE> parse_ode(const std::string& text) {
  Parser ps(text);
  if (!ps.derivative_prefix()) ps.fail("expected 'dy/dx ='");
  ps.expect_op('=');
  Token at = ps.peek();
  Frac rhs = parse_side(ps);
  if (!ps.at_end()) ps.fail("unexpected '" + ps.peek().text + "'");
  return ode_from(rhs, ps, at);
}

SeriesPolynomial parse_algebraic(const std::string& text) {
  Parser ps(text);
  Token at = ps.peek();
  Frac lhs = parse_side(ps);
  if (ps.at_op('=')) {
    ps.advance();
    Frac rhs = parse_side(ps);
    lhs = normalize({gadd(gmul(lhs.num, rhs.den), gmul(rhs.num, lhs.den), -1), gmul(lhs.den, rhs.den)});
  }
  if (!ps.at_end()) ps.fail("unexpected '" + ps.peek().text + "'");
  // num/den = 0 is num = 0.
  for (const auto& [k, c] : lhs.num)
    if (!is_integer(k.first) || k.first < 0) ps.fail("the algebraic equation needs natural powers of y", at);
  auto coeffs = dense(lhs.num, 0);
  if (coeffs.size() < 2) ps.fail("equation does not involve y", at);
  return SeriesPolynomial(std::move(coeffs));
}

Equation parse_equation(const std::string& text) {
  {
    Parser probe(text);
    if (probe.derivative_prefix()) {
      auto ode = parse_ode(text);
      if (auto* m = std::get_if<MonomialODE>(&ode)) return *m;
      return std::get<RationalODE>(ode);
    }
  }
  return parse_algebraic(text);
}

FieldODE parse_field_ode(const std::string& text) {
  Parser ps(text);
  if (!ps.derivative_prefix()) ps.fail("expected 'dy/dx ='");
  ps.expect_op('=');
  Token at = ps.peek();
  Frac rhs = parse_side(ps);
  if (!ps.at_end()) ps.fail("unexpected '" + ps.peek().text + "'");
  long shift = natural_shift({&rhs.num, &rhs.den}, ps, at);
  FieldODE e;
  e.p = field_poly(rhs.num, shift, ps, at);
  e.q = field_poly(rhs.den, shift, ps, at);
  while (!e.p.empty() && e.p.back().is_zero()) e.p.pop_back();
  return e;
}

IntegralFactorProblem parse_factor_problem(const std::string& text) {
  Parser ps(text);
  std::optional<Frac> P, Q;
  Token start = ps.peek();
  while (!ps.at_end()) {
    Token name = ps.peek();
    if (name.kind != Token::ident || (name.text != "P" && name.text != "Q")) ps.fail("expected 'P =' or 'Q ='");
    ps.advance();
    ps.expect_op('=');
    Frac value = parse_side(ps);
    (name.text == "P" ? P : Q) = value;
    if (ps.at_op(';')) ps.advance();
    else if (!ps.at_end()) ps.fail("expected ';'");
  }
  if (!P || !Q) ps.fail("both P and Q are required", start);
  if (!y_free(P->den) || !y_free(Q->den)) ps.fail("P and Q must be polynomials in y", start);
  long shift = natural_shift({&P->num, &Q->num}, ps, start);
  if (shift > 0) ps.fail("P and Q must be polynomials in y", start);
  YPolynomial pn = field_poly(P->num, 0, ps, start), qn = field_poly(Q->num, 0, ps, start);
  YPolynomial pd = field_poly(P->den, 0, ps, start), qd = field_poly(Q->den, 0, ps, start);
  for (auto& c : pn) c = c / pd.at(0);
  for (auto& c : qn) c = c / qd.at(0);
  try {
    return IntegralFactorProblem::make(0, pn, 0, qn);
  } catch (const std::invalid_argument& e) {
    ps.fail(e.what(), start);
  }
}

}  // namespace puiseux
