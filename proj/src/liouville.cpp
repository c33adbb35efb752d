#include "puiseux/liouville.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace puiseux {

// ---------------------------------------------------------------------------
// normal form

namespace detail {

struct AtomInfo {
  std::string key;
  bool is_root = false;
  Expr arg;                            // integrand of an integral atom
  std::vector<RationalFunction> poly;  // monic polynomial of a root atom
};
using AtomPtr = std::shared_ptr<const AtomInfo>;

struct AtomLess {
  bool operator()(const AtomPtr& a, const AtomPtr& b) const { return a->key < b->key; }
};

struct ExpPart {
  std::shared_ptr<const NormalForm> arg;  // null: no exponential factor
  std::string key;
};

struct MonoKey {
  std::map<AtomPtr, long, AtomLess> powers;
  ExpPart exp;
};

struct MonoLess {
  bool operator()(const MonoKey& a, const MonoKey& b) const {
    if (a.exp.key != b.exp.key) return a.exp.key < b.exp.key;
    auto ia = a.powers.begin(), ib = b.powers.begin();
    for (; ia != a.powers.end() && ib != b.powers.end(); ++ia, ++ib) {
      if (ia->first->key != ib->first->key) return ia->first->key < ib->first->key;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.powers.end() && ib != b.powers.end();
  }
};

using Poly = std::map<MonoKey, RationalFunction, MonoLess>;

}  // namespace detail

using namespace detail;

struct NormalForm {
  detail::Poly num;
  detail::Poly den;
};

namespace {

Poly constant_poly(const RationalFunction& c) {
  Poly p;
  if (!c.is_zero()) p.emplace(MonoKey{}, c);
  return p;
}

void add_term(Poly& p, const MonoKey& k, const RationalFunction& c) {
  auto it = p.find(k);
  if (it == p.end()) {
    if (!c.is_zero()) p.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

NormalForm nf_add(const NormalForm& a, const NormalForm& b);
NormalForm nf_neg(const NormalForm& a);
std::string nf_key(const NormalForm& a);

ExpPart exp_combine(const ExpPart& a, const ExpPart& b) {
  if (!a.arg) return b;
  if (!b.arg) return a;
  NormalForm sum = nf_add(*a.arg, *b.arg);
  if (sum.num.empty()) return {};
  std::string key = nf_key(sum);
  return {std::make_shared<const NormalForm>(std::move(sum)), std::move(key)};
}

MonoKey mono_mul(const MonoKey& a, const MonoKey& b) {
  MonoKey r;
  r.powers = a.powers;
  for (const auto& [atom, e] : b.powers) {
    long& slot = r.powers[atom];
    slot += e;
    if (slot == 0) r.powers.erase(atom);
  }
  r.exp = exp_combine(a.exp, b.exp);
  return r;
}

/// Replaces root powers r^e with e >= deg by r^(e-deg) * (lower terms).
Poly reduce_roots(Poly p) {
  for (;;) {
    auto it = p.begin();
    AtomPtr hit;
    for (; it != p.end(); ++it) {
      for (const auto& [atom, e] : it->first.powers)
        if (atom->is_root && e >= static_cast<long>(atom->poly.size()) - 1) hit = atom;
      if (hit) break;
    }
    if (!hit) return p;
    MonoKey k = it->first;
    RationalFunction c = it->second;
    p.erase(it);
    long d = static_cast<long>(hit->poly.size()) - 1;
    k.powers[hit] -= d;
    if (k.powers[hit] == 0) k.powers.erase(hit);
    for (long i = 0; i < d; ++i) {
      if (hit->poly[i].is_zero()) continue;
      MonoKey t = k;
      if (i > 0) t.powers[hit] += i;
      add_term(p, t, -(c * hit->poly[i]));
    }
  }
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  bool roots = false;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      MonoKey k = mono_mul(ka, kb);
      for (const auto& [atom, e] : k.powers) roots = roots || atom->is_root;
      add_term(r, k, ca * cb);
    }
  return roots ? reduce_roots(std::move(r)) : r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [k, c] : b) add_term(r, k, c);
  return r;
}

Poly poly_scale(const Poly& a, const RationalFunction& c) {
  Poly r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : a) r.emplace(k, v * c);
  return r;
}

bool has_root(const MonoKey& k) {
  for (const auto& [atom, e] : k.powers)
    if (atom->is_root) return true;
  return false;
}

MonoKey mono_inverse(const MonoKey& k) {
  MonoKey r;
  for (const auto& [atom, e] : k.powers) r.powers.emplace(atom, -e);
  if (k.exp.arg) {
    NormalForm neg = nf_neg(*k.exp.arg);
    std::string key = nf_key(neg);
    r.exp = {std::make_shared<const NormalForm>(std::move(neg)), std::move(key)};
  }
  return r;
}

bool poly_equal(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return false;
  MonoLess less;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (less(ia->first, ib->first) || less(ib->first, ia->first) || !(ia->second == ib->second)) return false;
  return true;
}

NormalForm normalize(NormalForm f) {
  if (f.num.empty()) return {{}, constant_poly(1)};
  if (f.den.size() == 1 && !has_root(f.den.begin()->first)) {
    const auto& [k, c] = *f.den.begin();
    Poly inv;
    inv.emplace(mono_inverse(k), c.inverse());
    f.num = poly_mul(f.num, inv);
    f.den = constant_poly(1);
    return f;
  }
  if (poly_equal(f.num, f.den)) return {constant_poly(1), constant_poly(1)};
  RationalFunction lead = f.den.begin()->second.inverse();
  f.num = poly_scale(f.num, lead);
  f.den = poly_scale(f.den, lead);
  return f;
}

NormalForm nf_add(const NormalForm& a, const NormalForm& b) {
  if (poly_equal(a.den, b.den)) return normalize({poly_add(a.num, b.num), a.den});
  return normalize({poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den)});
}

NormalForm nf_neg(const NormalForm& a) { return {poly_scale(a.num, -1), a.den}; }

NormalForm nf_mul(const NormalForm& a, const NormalForm& b) {
  return normalize({poly_mul(a.num, b.num), poly_mul(a.den, b.den)});
}

NormalForm nf_inv(const NormalForm& a) {
  if (a.num.empty()) throw MalformedExpression("division by an expression that is structurally zero");
  return normalize({a.den, a.num});
}

std::string poly_key(const Poly& p) {
  std::ostringstream os;
  os << "(+";
  for (const auto& [k, c] : p) {
    os << " (* {" << c.to_string("x") << "}";
    for (const auto& [atom, e] : k.powers) os << " " << atom->key << "^" << e;
    if (k.exp.arg) os << " (exp (int " << k.exp.key << "))";
    os << ")";
  }
  os << ")";
  return os.str();
}

std::string nf_key(const NormalForm& a) {
  std::string s = poly_key(a.num);
  if (!(a.den.size() == 1 && a.den.begin()->first.powers.empty() && !a.den.begin()->first.exp.arg &&
        a.den.begin()->second == RationalFunction(1)))
    s = "(/ " + s + " " + poly_key(a.den) + ")";
  return s;
}

NormalForm atom_form(AtomPtr atom) {
  MonoKey k;
  k.powers.emplace(std::move(atom), 1);
  Poly p;
  p.emplace(std::move(k), RationalFunction(1));
  return {std::move(p), constant_poly(1)};
}

}  // namespace

std::string to_string(ZeroTest z) {
  switch (z) {
    case ZeroTest::zero: return "zero";
    case ZeroTest::nonzero: return "nonzero";
    case ZeroTest::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// nodes

struct Expr::Node {
  Kind kind = Kind::rational;
  RationalFunction value;
  std::vector<Expr> children;
  std::vector<RationalFunction> poly;
  long branch = 0;
  std::shared_ptr<const NormalForm> nf;
};

namespace {

using NodePtr = std::shared_ptr<Expr::Node>;

Expr make(Expr::Kind kind, std::vector<Expr> children, NormalForm nf) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->children = std::move(children);
  n->nf = std::make_shared<const NormalForm>(std::move(nf));
  return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

NormalForm rational_form(const RationalFunction& r) { return {constant_poly(r), constant_poly(1)}; }

bool is_leaf(const Expr& e, const RationalFunction& v) {
  return e.kind() == Expr::Kind::rational && e.value() == v;
}

}  // namespace

Expr::Expr() : Expr(RationalFunction()) {}

Expr::Expr(const RationalFunction& r) {
  auto n = std::make_shared<Node>();
  n->value = r;
  n->nf = std::make_shared<const NormalForm>(rational_form(r));
  node_ = std::move(n);
}

Expr Expr::x() { return Expr(RationalFunction::variable()); }

Expr Expr::integral(const Expr& f) {
  if (f.normal_form().num.empty()) return Expr();
  auto atom = std::make_shared<AtomInfo>();
  atom->key = "(int " + nf_key(f.normal_form()) + ")";
  atom->arg = f;
  return make(Kind::integral, {f}, atom_form(std::move(atom)));
}

Expr Expr::exp_integral(const Expr& f) {
  if (f.normal_form().num.empty()) return Expr(1);
  MonoKey k;
  k.exp = {f.node_->nf, nf_key(f.normal_form())};
  Poly p;
  p.emplace(std::move(k), RationalFunction(1));
  return make(Kind::exp_integral, {f}, {std::move(p), constant_poly(1)});
}

Expr Expr::root(std::vector<RationalFunction> poly, long branch) {
  while (!poly.empty() && poly.back().is_zero()) poly.pop_back();
  if (poly.size() < 2) throw MalformedExpression("algebraic root of a constant polynomial");
  RationalFunction lc = poly.back().inverse();
  for (auto& c : poly) c *= lc;
  if (poly.size() == 2) return Expr(-poly[0]);
  auto atom = std::make_shared<AtomInfo>();
  atom->key = "(root {" + y_polynomial_to_string(poly) + "} " + std::to_string(branch) + ")";
  atom->is_root = true;
  atom->poly = poly;
  auto n = std::make_shared<Node>();
  n->kind = Kind::root;
  n->poly = std::move(poly);
  n->branch = branch;
  n->nf = std::make_shared<const NormalForm>(atom_form(std::move(atom)));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
const RationalFunction& Expr::value() const { return node_->value; }
const std::vector<RationalFunction>& Expr::root_polynomial() const { return node_->poly; }
long Expr::root_branch() const { return node_->branch; }
const NormalForm& Expr::normal_form() const { return *node_->nf; }

ZeroTest Expr::zero_test() const {
  const Poly& num = node_->nf->num;
  if (num.empty()) return ZeroTest::zero;
  if (num.size() == 1 && !has_root(num.begin()->first)) return ZeroTest::nonzero;
  return ZeroTest::inconclusive;
}

std::optional<RationalFunction> Expr::as_rational() const {
  const NormalForm& f = *node_->nf;
  if (f.den.size() != 1 || !f.den.begin()->first.powers.empty() || f.den.begin()->first.exp.arg) return std::nullopt;
  if (f.num.empty()) return RationalFunction();
  if (f.num.size() != 1 || !f.num.begin()->first.powers.empty() || f.num.begin()->first.exp.arg) return std::nullopt;
  return f.num.begin()->second / f.den.begin()->second;
}

std::size_t Expr::count(Kind k) const {
  std::size_t n = kind() == k ? 1 : 0;
  for (const auto& c : children()) n += c.count(k);
  return n;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::rational && b.kind() == Expr::Kind::rational) return Expr(a.value() + b.value());
  if (is_leaf(a, RationalFunction())) return b;
  if (is_leaf(b, RationalFunction())) return a;
  std::vector<Expr> ch;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == Expr::Kind::add) ch.insert(ch.end(), e->children().begin(), e->children().end());
    else ch.push_back(*e);
  }
  return make(Expr::Kind::add, std::move(ch), nf_add(a.normal_form(), b.normal_form()));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::rational && b.kind() == Expr::Kind::rational) return Expr(a.value() * b.value());
  if (is_leaf(a, RationalFunction()) || is_leaf(b, RationalFunction())) return Expr();
  if (is_leaf(a, RationalFunction(1))) return b;
  if (is_leaf(b, RationalFunction(1))) return a;
  std::vector<Expr> ch;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == Expr::Kind::mul) ch.insert(ch.end(), e->children().begin(), e->children().end());
    else ch.push_back(*e);
  }
  return make(Expr::Kind::mul, std::move(ch), nf_mul(a.normal_form(), b.normal_form()));
}

Expr Expr::operator-() const { return Expr(-1) * *this; }

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator/(const Expr& a, const Expr& b) {
  if (b.kind() == Expr::Kind::rational) {
    if (b.value().is_zero()) throw MalformedExpression("division by zero");
    return a * Expr(b.value().inverse());
  }
  if (b.kind() == Expr::Kind::inverse) return a * b.children()[0];
  return a * make(Expr::Kind::inverse, {b}, nf_inv(b.normal_form()));
}

Expr pow(const Expr& a, long n) {
  if (n < 0) return Expr(1) / pow(a, -n);
  Expr r(1);
  for (long i = 0; i < n; ++i) r = r * a;
  return r;
}

ZeroTest equal(const Expr& a, const Expr& b) { return (a - b).zero_test(); }

Expr Expr::derivative() const {
  switch (kind()) {
    case Kind::rational: return Expr(value().derivative());
    case Kind::add: {
      Expr s;
      for (const auto& c : children()) s = s + c.derivative();
      return s;
    }
    case Kind::mul: {
      Expr s;
      for (std::size_t i = 0; i < children().size(); ++i) {
        Expr t = children()[i].derivative();
        for (std::size_t j = 0; j < children().size(); ++j)
          if (j != i) t = t * children()[j];
        s = s + t;
      }
      return s;
    }
    case Kind::inverse: {
      const Expr& a = children()[0];
      return -(a.derivative() / (a * a));
    }
    case Kind::integral: return children()[0];
    case Kind::exp_integral: return children()[0] * *this;
    case Kind::root: {
      Expr num, den, power(1);
      for (std::size_t i = 0; i < node_->poly.size(); ++i) {
        num = num + Expr(node_->poly[i].derivative()) * power;
        if (i + 1 < node_->poly.size()) den = den + Expr(node_->poly[i + 1] * RationalFunction(static_cast<long>(i + 1))) * power;
        power = power * *this;
      }
      if (num.is_zero()) return Expr();
      return -(num / den);
    }
  }
  return Expr();
}

Expr integrate(const Expr& f) {
  auto r = f.as_rational();
  if (!r) return Expr::integral(f);
  const UniPoly& den = r->den();
  long k = den.degree();
  if (static_cast<long>(den.low_degree()) != k) return Expr::integral(f);
  RationalFunction sum;
  const auto& c = r->num().coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    long e = static_cast<long>(i) - k;  // term c_i x^e
    if (e == -1) return Expr::integral(f);
    Rational coef = c[i] / Rational(e + 1);
    if (e + 1 >= 0) sum += RationalFunction(UniPoly::monomial(coef, static_cast<std::size_t>(e + 1)));
    else sum += RationalFunction(UniPoly(coef), UniPoly::monomial(1, static_cast<std::size_t>(-(e + 1))));
  }
  return Expr(sum);
}

Expr exp_integrate(const Expr& f) {
  auto r = f.as_rational();
  if (!r) return Expr::exp_integral(f);
  const UniPoly& den = r->den();
  long k = den.degree();
  if (k < 1 || static_cast<long>(den.low_degree()) != k) return Expr::exp_integral(f);
  Rational c = r->num().coeff(static_cast<std::size_t>(k - 1));
  if (c == 0 || !is_integer(c)) return Expr::exp_integral(f);
  RationalFunction x = RationalFunction::variable();
  RationalFunction rest = *r - RationalFunction(c) / x;
  return Expr(x.pow(c.get_num().get_si())) * Expr::exp_integral(Expr(rest));
}

// ---------------------------------------------------------------------------
// text

namespace {

std::string leaf_text(const RationalFunction& r) {
  std::string s = r.to_string("x");
  if (s.find(' ') != std::string::npos || s.find('(') != std::string::npos) return "{" + s + "}";
  return s;
}

}  // namespace

std::string y_polynomial_to_string(const std::vector<RationalFunction>& poly) {
  std::string out;
  for (std::size_t i = poly.size(); i-- > 0;) {
    const RationalFunction& c = poly[i];
    if (c.is_zero()) continue;
    std::string cs = c.to_string("x");
    std::string term;
    if (i == 0) {
      term = cs;
    } else {
      if (c == RationalFunction(-1)) term = "-";
      else if (!(c == RationalFunction(1))) term = (c.is_constant() && cs.find('/') == std::string::npos ? cs : "(" + cs + ")") + "*";
      term += "y";
      if (i > 1) term += "^" + std::to_string(i);
    }
    if (out.empty()) out = term;
    else if (term.front() == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

std::string Expr::to_string() const {
  auto join = [&](const char* head) {
    std::string s = std::string("(") + head;
    for (const auto& c : children()) s += " " + c.to_string();
    return s + ")";
  };
  switch (kind()) {
    case Kind::rational: return leaf_text(value());
    case Kind::add: return join("+");
    case Kind::mul: return join("*");
    case Kind::inverse: return join("inv");
    case Kind::integral: return join("int");
    case Kind::exp_integral: return "(exp (int " + children()[0].to_string() + "))";
    case Kind::root: return "(root {" + y_polynomial_to_string(node_->poly) + "} " + std::to_string(node_->branch) + ")";
  }
  return "?";
}

// Infix parser: polynomials in y over Q(x).

namespace {

using YPoly = std::vector<RationalFunction>;

YPoly ytrim(YPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

YPoly yadd(const YPoly& a, const YPoly& b, long sign = 1) {
  YPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign == 1 ? b[i] : -b[i];
  return ytrim(std::move(r));
}

YPoly ymul(const YPoly& a, const YPoly& b) {
  if (a.empty() || b.empty()) return {};
  YPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return ytrim(std::move(r));
}

class InfixParser {
 public:
  explicit InfixParser(const std::string& s) : s_(s) {}

  YPoly parse() {
    YPoly r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedExpression(what + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  YPoly expr() {
    YPoly r = term();
    for (;;) {
      if (eat('+')) r = yadd(r, term());
      else if (eat('-')) r = yadd(r, term(), -1);
      else return r;
    }
  }

  YPoly term() {
    YPoly r = unary();
    for (;;) {
      if (eat('*')) {
        r = ymul(r, unary());
      } else if (eat('/')) {
        YPoly d = unary();
        if (d.size() != 1) fail(d.empty() ? "division by zero" : "division by a polynomial in y");
        RationalFunction inv = d[0].inverse();
        for (auto& c : r) c *= inv;
      } else {
        return r;
      }
    }
  }

  YPoly unary() {
    if (eat('-')) return ymul({RationalFunction(-1)}, unary());
    if (eat('+')) return unary();
    return power();
  }

  long exponent() {
    bool paren = eat('(');
    bool neg = eat('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    long e = std::stol(s_.substr(start, pos_ - start));
    if (paren && !eat(')')) fail("expected ')'");
    return neg ? -e : e;
  }

  YPoly power() {
    YPoly base = atom();
    if (!eat('^')) return base;
    long e = exponent();
    if (base.size() > 1 && e < 0) fail("negative power of a polynomial in y");
    if (e < 0) {
      if (base.empty()) fail("division by zero");
      return {base[0].pow(e)};
    }
    YPoly r{RationalFunction(1)};
    for (long i = 0; i < e; ++i) r = ymul(r, base);
    return r;
  }

  YPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      YPoly r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (c == 'x') {
      ++pos_;
      return {RationalFunction::variable()};
    }
    if (c == 'y') {
      ++pos_;
      return {RationalFunction(), RationalFunction(1)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return ytrim({RationalFunction(Rational(mpz_class(s_.substr(start, pos_ - start))))});
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

class PrefixParser {
 public:
  explicit PrefixParser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedExpression(what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string token() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')' && s_[pos_] != '{' && s_[pos_] != '}')
      ++pos_;
    if (start == pos_) fail("expected a token");
    return s_.substr(start, pos_ - start);
  }
  std::string braced() {
    std::size_t start = ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '}') ++pos_;
    if (pos_ == s_.size()) fail("unterminated '{'");
    return s_.substr(start, pos_++ - start);
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Expr expr() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (s_[pos_] == '{') return Expr(parse_rational_function(braced()));
    if (s_[pos_] != '(') return Expr(parse_rational_function(token()));
    ++pos_;
    std::string head = token();
    std::vector<Expr> args;
    Expr result;
    if (head == "root") {
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '{') fail("expected '{'");
      auto poly = parse_y_polynomial(braced());
      std::string k = token();
      try {
        result = Expr::root(std::move(poly), std::stol(k));
      } catch (const std::logic_error&) {
        fail("bad root branch");
      }
    } else if (head == "exp") {
      expect('(');
      if (token() != "int") fail("expected 'int' after 'exp ('");
      result = Expr::exp_integral(expr());
      expect(')');
    } else {
      for (skip(); pos_ < s_.size() && s_[pos_] != ')'; skip()) args.push_back(expr());
      if (head == "+" || head == "*") {
        if (args.empty()) fail("empty operator");
        result = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) result = head == "+" ? result + args[i] : result * args[i];
      } else if (head == "inv" && args.size() == 1) {
        result = Expr(1) / args[0];
      } else if (head == "int" && args.size() == 1) {
        result = Expr::integral(args[0]);
      } else {
        fail("unknown form '" + head + "'");
      }
    }
    expect(')');
    return result;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<RationalFunction> parse_y_polynomial(const std::string& text) { return InfixParser(text).parse(); }

RationalFunction parse_rational_function(const std::string& text) {
  auto p = parse_y_polynomial(text);
  if (p.size() > 1) throw MalformedExpression("unexpected y in '" + text + "'");
  return p.empty() ? RationalFunction() : p[0];
}

Expr parse_expr(const std::string& text) { return PrefixParser(text).parse(); }

}  // namespace puiseux
