#include "proftree/stlc.hpp"

#include <cassert>
#include <cctype>
#include <sstream>
#include <utility>

namespace proftree {

// ---------------------------------------------------------------- types ---

struct Type::Node {
  Kind kind;
  // Null-node Types so that constructing the shared Base singleton does not
  // re-enter Type::Type().
  Type dom{nullptr}, cod{nullptr};  // Arrow
  std::vector<Type> comps;          // Product
  Node() : kind(Kind::Base) {}
};

Type::Type() {
  static const auto base = std::make_shared<const Node>();
  node_ = base;
}
Type Type::base() { return Type(); }

Type Type::arrow(Type dom, Type cod) {
  auto n = std::make_shared<Type::Node>();
  n->kind = Kind::Arrow;
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return Type(std::move(n));
}

Type Type::product(std::vector<Type> comps) {
  auto n = std::make_shared<Type::Node>();
  n->kind = Kind::Product;
  n->comps = std::move(comps);
  return Type(std::move(n));
}

Type Type::unit() { return product({}); }

Type::Kind Type::kind() const { return node_->kind; }
const Type& Type::dom() const { return node_->dom; }
const Type& Type::cod() const { return node_->cod; }
const std::vector<Type>& Type::components() const { return node_->comps; }

bool Type::operator==(const Type& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Base: return true;
    case Kind::Arrow: return dom() == other.dom() && cod() == other.cod();
    case Kind::Product: {
      const auto& a = components();
      const auto& b = other.components();
      if (a.size() != b.size()) return false;
      for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
      return true;
    }
  }
  return false;
}

Type fun_power(const Type& a, int n, const Type& cod) {
  Type t = cod;
  for (int i = 0; i < n; ++i) t = Type::arrow(a, t);
  return t;
}

std::string format_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Base:
      return "o";
    case Type::Kind::Arrow: {
      std::string d = format_type(t.dom());
      if (t.dom().is_arrow()) d = "(" + d + ")";
      return d + " -> " + format_type(t.cod());
    }
    case Type::Kind::Product: {
      const auto& cs = t.components();
      if (cs.empty()) return "1";
      std::string s = "(";
      for (size_t i = 0; i < cs.size(); ++i) {
        if (i) s += " * ";
        s += format_type(cs[i]);
      }
      if (cs.size() == 1) s += " *";  // unary product marker
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------- terms ---

struct Term::Node {
  Kind kind;
  int idx = 0;                // Var index / Proj component
  Type ann;                   // Lam
  std::vector<Term> sub;      // Lam: {body}; App: {fn, arg}; Tuple; Proj: {subject}
};

Term Term::var(int index) {
  if (index < 0) throw IndexOutOfRange("negative de Bruijn index");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->idx = index;
  return Term(std::move(n));
}

Term Term::lam(Type dom, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->ann = std::move(dom);
  n->sub = {std::move(body)};
  return Term(std::move(n));
}

Term Term::app(Term fn, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sub = {std::move(fn), std::move(arg)};
  return Term(std::move(n));
}

Term Term::tuple(std::vector<Term> comps) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tuple;
  n->sub = std::move(comps);
  return Term(std::move(n));
}

Term Term::proj(Term subject, int index) {
  if (index < 1) throw IndexOutOfRange("projection index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Proj;
  n->idx = index;
  n->sub = {std::move(subject)};
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
int Term::index() const { return node_->idx; }
const Type& Term::annotation() const { return node_->ann; }
const Term& Term::body() const { return node_->sub[0]; }
const Term& Term::fn() const { return node_->sub[0]; }
const Term& Term::arg() const { return node_->sub[1]; }
const std::vector<Term>& Term::components() const { return node_->sub; }
const Term& Term::subject() const { return node_->sub[0]; }

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || node_->idx != other.node_->idx) return false;
  if (kind() == Kind::Lam && !(node_->ann == other.node_->ann)) return false;
  const auto& a = node_->sub;
  const auto& b = other.node_->sub;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

int term_size(const Term& t) {
  int n = 1;
  switch (t.kind()) {
    case Term::Kind::Var: return 1;
    case Term::Kind::Lam: return 1 + term_size(t.body());
    case Term::Kind::App: return 1 + term_size(t.fn()) + term_size(t.arg());
    case Term::Kind::Tuple:
      for (const auto& c : t.components()) n += term_size(c);
      return n;
    case Term::Kind::Proj: return 1 + term_size(t.subject());
  }
  return n;
}

// ------------------------------------------------------------ typecheck ---

namespace {

Type check(const TypeContext& ctx, const Term& t, std::string& path) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int i = t.index();
      if (i < 0 || static_cast<size_t>(i) >= ctx.size())
        throw ScopeError("unbound variable " + std::to_string(i) + " at " + path +
                         " (context has " + std::to_string(ctx.size()) + " binders)");
      return ctx[ctx.size() - 1 - static_cast<size_t>(i)];
    }
    case Term::Kind::Lam: {
      TypeContext ctx2 = ctx;
      ctx2.push_back(t.annotation());
      size_t mark = path.size();
      path += ".body";
      Type b = check(ctx2, t.body(), path);
      path.resize(mark);
      return Type::arrow(t.annotation(), b);
    }
    case Term::Kind::App: {
      size_t mark = path.size();
      path += ".fn";
      Type f = check(ctx, t.fn(), path);
      path.resize(mark);
      if (!f.is_arrow())
        throw TypeError(path, "a function type", format_type(f));
      path += ".arg";
      Type a = check(ctx, t.arg(), path);
      path.resize(mark);
      if (!(a == f.dom()))
        throw TypeError(path + ".arg", format_type(f.dom()), format_type(a));
      return f.cod();
    }
    case Term::Kind::Tuple: {
      std::vector<Type> comps;
      comps.reserve(t.components().size());
      size_t mark = path.size();
      int i = 0;
      for (const auto& c : t.components()) {
        path += "." + std::to_string(++i);
        comps.push_back(check(ctx, c, path));
        path.resize(mark);
      }
      return Type::product(std::move(comps));
    }
    case Term::Kind::Proj: {
      size_t mark = path.size();
      path += ".subject";
      Type s = check(ctx, t.subject(), path);
      path.resize(mark);
      if (!s.is_product())
        throw TypeError(path, "a product type", format_type(s));
      int i = t.index();
      if (i < 1 || static_cast<size_t>(i) > s.components().size())
        throw TypeError(path, "component index in 1.." +
                                  std::to_string(s.components().size()),
                        std::to_string(i));
      return s.components()[static_cast<size_t>(i) - 1];
    }
  }
  throw TypeError(path, "a term", "unknown node");
}

}  // namespace

Type typecheck(const TypeContext& ctx, const Term& t) {
  std::string path = "root";
  return check(ctx, t, path);
}

// -------------------------------------------------------- substitution ---

Term shift(const Term& t, int d, int cutoff) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int i = t.index();
      if (i < cutoff) return t;
      assert(i + d >= 0 && "shift would create a negative index");
      return Term::var(i + d);
    }
    case Term::Kind::Lam:
      return Term::lam(t.annotation(), shift(t.body(), d, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift(t.fn(), d, cutoff), shift(t.arg(), d, cutoff));
    case Term::Kind::Tuple: {
      std::vector<Term> cs;
      cs.reserve(t.components().size());
      for (const auto& c : t.components()) cs.push_back(shift(c, d, cutoff));
      return Term::tuple(std::move(cs));
    }
    case Term::Kind::Proj:
      return Term::proj(shift(t.subject(), d, cutoff), t.index());
  }
  return t;
}

Term substitute(const Term& t, int depth, const Term& s) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int i = t.index();
      if (i == depth) return shift(s, depth);
      return i > depth ? Term::var(i - 1) : t;
    }
    case Term::Kind::Lam:
      return Term::lam(t.annotation(), substitute(t.body(), depth + 1, s));
    case Term::Kind::App:
      return Term::app(substitute(t.fn(), depth, s), substitute(t.arg(), depth, s));
    case Term::Kind::Tuple: {
      std::vector<Term> cs;
      cs.reserve(t.components().size());
      for (const auto& c : t.components()) cs.push_back(substitute(c, depth, s));
      return Term::tuple(std::move(cs));
    }
    case Term::Kind::Proj:
      return Term::proj(substitute(t.subject(), depth, s), t.index());
  }
  return t;
}

// -------------------------------------------------------- normalization ---

namespace {

struct StepBudget {
  std::uint64_t left;
  void spend() {
    if (left == 0) throw GuardExceeded(0, kDefaultStepGuard);
    --left;
  }
};

// Contract head redexes until the head is a binder, tuple or neutral.
Term whnf(Term t, StepBudget& budget) {
  for (;;) {
    if (t.kind() == Term::Kind::App) {
      Term f = whnf(t.fn(), budget);
      if (f.kind() == Term::Kind::Lam) {
        budget.spend();
        t = substitute(f.body(), 0, t.arg());
        continue;
      }
      return Term::app(std::move(f), t.arg());
    }
    if (t.kind() == Term::Kind::Proj) {
      Term s = whnf(t.subject(), budget);
      if (s.kind() == Term::Kind::Tuple) {
        budget.spend();
        t = s.components()[static_cast<size_t>(t.index()) - 1];
        continue;
      }
      return Term::proj(std::move(s), t.index());
    }
    return t;
  }
}

Term beta_normal(const Term& t0, StepBudget& budget) {
  Term t = whnf(t0, budget);
  switch (t.kind()) {
    case Term::Kind::Var: return t;
    case Term::Kind::Lam:
      return Term::lam(t.annotation(), beta_normal(t.body(), budget));
    case Term::Kind::App:
      return Term::app(beta_normal(t.fn(), budget), beta_normal(t.arg(), budget));
    case Term::Kind::Tuple: {
      std::vector<Term> cs;
      cs.reserve(t.components().size());
      for (const auto& c : t.components()) cs.push_back(beta_normal(c, budget));
      return Term::tuple(std::move(cs));
    }
    case Term::Kind::Proj:
      return Term::proj(beta_normal(t.subject(), budget), t.index());
  }
  return t;
}

Term eta_long(const TypeContext& ctx, const Term& t, const Type& ty);

// Rebuild a beta-normal neutral term, eta-expanding its arguments; returns
// the rebuilt term and its type.
std::pair<Term, Type> eta_neutral(const TypeContext& ctx, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      size_t i = static_cast<size_t>(t.index());
      return {t, ctx[ctx.size() - 1 - i]};
    }
    case Term::Kind::App: {
      auto [f, fty] = eta_neutral(ctx, t.fn());
      assert(fty.is_arrow() && "ill-typed neutral application");
      return {Term::app(f, eta_long(ctx, t.arg(), fty.dom())), fty.cod()};
    }
    case Term::Kind::Proj: {
      auto [s, sty] = eta_neutral(ctx, t.subject());
      assert(sty.is_product());
      return {Term::proj(s, t.index()),
              sty.components()[static_cast<size_t>(t.index()) - 1]};
    }
    default:
      assert(false && "eta_neutral on non-neutral term");
      return {t, Type::base()};
  }
}

// t is beta-normal and has type ty in ctx; produce its eta-long form.
Term eta_long(const TypeContext& ctx, const Term& t, const Type& ty) {
  switch (ty.kind()) {
    case Type::Kind::Arrow: {
      if (t.kind() == Term::Kind::Lam) {
        TypeContext ctx2 = ctx;
        ctx2.push_back(ty.dom());
        return Term::lam(ty.dom(), eta_long(ctx2, t.body(), ty.cod()));
      }
      // Neutral at arrow type: wrap in a binder.  The new application has a
      // neutral head, so the result stays beta-normal.
      TypeContext ctx2 = ctx;
      ctx2.push_back(ty.dom());
      Term body = Term::app(shift(t, 1), Term::var(0));
      return Term::lam(ty.dom(), eta_long(ctx2, body, ty.cod()));
    }
    case Type::Kind::Product: {
      const auto& comps = ty.components();
      std::vector<Term> out;
      out.reserve(comps.size());
      if (t.kind() == Term::Kind::Tuple) {
        for (size_t i = 0; i < comps.size(); ++i)
          out.push_back(eta_long(ctx, t.components()[i], comps[i]));
      } else {
        // Neutral of product type (or anything of unit type) is expanded to
        // a literal tuple of projections.
        for (size_t i = 0; i < comps.size(); ++i)
          out.push_back(eta_long(ctx, Term::proj(t, static_cast<int>(i) + 1), comps[i]));
      }
      return Term::tuple(std::move(out));
    }
    case Type::Kind::Base:
      return eta_neutral(ctx, t).first;
  }
  return t;
}

}  // namespace

Term normalize(const TypeContext& ctx, const Term& t, std::uint64_t step_guard) {
  Type ty = typecheck(ctx, t);
  StepBudget budget{step_guard};
  Term b = beta_normal(t, budget);
  return eta_long(ctx, b, ty);
}

// -------------------------------------------------- redex surgery (tests) ---

namespace {

bool is_redex(const Term& t) {
  return (t.kind() == Term::Kind::App && t.fn().kind() == Term::Kind::Lam) ||
         (t.kind() == Term::Kind::Proj && t.subject().kind() == Term::Kind::Tuple);
}

Term contract_here(const Term& t) {
  if (t.kind() == Term::Kind::App) return substitute(t.fn().body(), 0, t.arg());
  return t.subject().components()[static_cast<size_t>(t.index()) - 1];
}

// Preorder walk; decrements *which past each redex and rewrites the chosen one.
bool walk(const Term& t, int* which, Term* out) {
  if (is_redex(t)) {
    if ((*which)-- == 0) {
      *out = contract_here(t);
      return true;
    }
  }
  switch (t.kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Lam: {
      Term b = t.body();
      if (walk(b, which, out)) {
        *out = Term::lam(t.annotation(), *out);
        return true;
      }
      return false;
    }
    case Term::Kind::App: {
      if (walk(t.fn(), which, out)) {
        *out = Term::app(*out, t.arg());
        return true;
      }
      if (walk(t.arg(), which, out)) {
        *out = Term::app(t.fn(), *out);
        return true;
      }
      return false;
    }
    case Term::Kind::Tuple: {
      const auto& cs = t.components();
      for (size_t i = 0; i < cs.size(); ++i) {
        if (walk(cs[i], which, out)) {
          std::vector<Term> copy = cs;
          copy[i] = *out;
          *out = Term::tuple(std::move(copy));
          return true;
        }
      }
      return false;
    }
    case Term::Kind::Proj: {
      if (walk(t.subject(), which, out)) {
        *out = Term::proj(*out, t.index());
        return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

bool contract_redex(const Term& t, int which, Term* out) {
  return walk(t, &which, out);
}

int count_redexes(const Term& t) {
  int n = is_redex(t) ? 1 : 0;
  switch (t.kind()) {
    case Term::Kind::Var: break;
    case Term::Kind::Lam: n += count_redexes(t.body()); break;
    case Term::Kind::App: n += count_redexes(t.fn()) + count_redexes(t.arg()); break;
    case Term::Kind::Tuple:
      for (const auto& c : t.components()) n += count_redexes(c);
      break;
    case Term::Kind::Proj: n += count_redexes(t.subject()); break;
  }
  return n;
}

// ------------------------------------------------------------- printing ---

namespace {

// prec: 0 = lambda body, 1 = application head, 2 = atom
void print_term(std::ostringstream& os, const Term& t, int depth, int prec) {
  switch (t.kind()) {
    case Term::Kind::Var:
      os << "x" << (depth - 1 - t.index());
      return;
    case Term::Kind::Lam: {
      if (prec > 0) os << "(";
      os << "\\x" << depth << ":" << format_type(t.annotation()) << ". ";
      print_term(os, t.body(), depth + 1, 0);
      if (prec > 0) os << ")";
      return;
    }
    case Term::Kind::App: {
      if (prec > 1) os << "(";
      print_term(os, t.fn(), depth, 1);
      os << " ";
      print_term(os, t.arg(), depth, 2);
      if (prec > 1) os << ")";
      return;
    }
    case Term::Kind::Tuple: {
      const auto& cs = t.components();
      if (cs.empty()) {
        os << "()";
        return;
      }
      os << "<";
      for (size_t i = 0; i < cs.size(); ++i) {
        if (i) os << ", ";
        print_term(os, cs[i], depth, 0);
      }
      os << ">";
      return;
    }
    case Term::Kind::Proj:
      print_term(os, t.subject(), depth, 2);
      os << "." << t.index();
      return;
  }
}

}  // namespace

std::string format_term(const Term& t) {
  std::ostringstream os;
  print_term(os, t, 0, 0);
  return os.str();
}

// -------------------------------------------------------------- parsing ---

namespace {

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line, col, what);
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance(1);
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool try_eat(char c) {
    if (peek() == c) {
      advance(1);
      return true;
    }
    return false;
  }

  bool try_eat_str(const std::string& s) {
    skip_ws();
    if (src.compare(pos, s.size(), s) == 0) {
      advance(s.size());
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
            src[pos] == '\''))
      advance(1);
    if (start == pos) fail("expected an identifier");
    return src.substr(start, pos - start);
  }

  int number() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
      advance(1);
    if (start == pos) fail("expected a number");
    return std::stoi(src.substr(start, pos - start));
  }
};

Type parse_type_expr(Lexer& lx);

Type parse_type_atom(Lexer& lx) {
  if (lx.try_eat('o')) return Type::base();
  if (lx.try_eat('1')) return Type::unit();
  if (lx.try_eat('(')) {
    Type first = parse_type_expr(lx);
    if (lx.try_eat(')')) return first;  // grouping
    std::vector<Type> comps{first};
    while (lx.try_eat('*')) {
      if (lx.try_eat(')')) return Type::product(std::move(comps));  // trailing *
      comps.push_back(parse_type_expr(lx));
    }
    lx.expect(')');
    if (comps.size() == 1) lx.fail("unary products are written '(T *)'");
    return Type::product(std::move(comps));
  }
  lx.fail("expected a type");
}

Type parse_type_expr(Lexer& lx) {
  Type lhs = parse_type_atom(lx);
  if (lx.try_eat_str("->")) return Type::arrow(lhs, parse_type_expr(lx));
  return lhs;
}

using NameStack = std::vector<std::string>;

Term parse_term_expr(Lexer& lx, NameStack& names);

Term parse_term_atom(Lexer& lx, NameStack& names) {
  char c = lx.peek();
  Term t = Term::unit_value();
  if (c == '(') {
    lx.expect('(');
    if (lx.try_eat(')')) {
      t = Term::unit_value();
    } else {
      t = parse_term_expr(lx, names);
      lx.expect(')');
    }
  } else if (c == '<') {
    lx.expect('<');
    std::vector<Term> comps{parse_term_expr(lx, names)};
    while (lx.try_eat(',')) comps.push_back(parse_term_expr(lx, names));
    lx.expect('>');
    t = Term::tuple(std::move(comps));
  } else {
    std::string name = lx.ident();
    int idx = -1;
    for (size_t i = names.size(); i-- > 0;) {
      if (names[i] == name) {
        idx = static_cast<int>(names.size() - 1 - i);
        break;
      }
    }
    if (idx < 0) throw ScopeError("unbound name '" + name + "' at " +
                                  std::to_string(lx.line) + ":" + std::to_string(lx.col));
    t = Term::var(idx);
  }
  while (lx.try_eat('.')) t = Term::proj(t, lx.number());
  return t;
}

bool starts_atom(char c) {
  return c == '(' || c == '<' || std::isalnum(static_cast<unsigned char>(c)) ||
         c == '_';
}

Term parse_term_expr(Lexer& lx, NameStack& names) {
  if (lx.try_eat('\\')) {
    std::string name = lx.ident();
    lx.expect(':');
    Type ann = parse_type_expr(lx);
    lx.expect('.');
    names.push_back(name);
    Term body = parse_term_expr(lx, names);
    names.pop_back();
    return Term::lam(std::move(ann), std::move(body));
  }
  Term t = parse_term_atom(lx, names);
  while (!lx.eof()) {
    char c = lx.peek();
    if (c == '\\') {
      // an abstraction as the trailing argument: `f \x:T. M`
      t = Term::app(t, parse_term_expr(lx, names));
      break;
    }
    if (!starts_atom(c)) break;
    t = Term::app(t, parse_term_atom(lx, names));
  }
  return t;
}

}  // namespace

Type parse_type(const std::string& text) {
  Lexer lx(text);
  Type t = parse_type_expr(lx);
  if (!lx.eof()) lx.fail("trailing input after type");
  return t;
}

Term parse_term(const std::string& text) {
  Lexer lx(text);
  NameStack names;
  Term t = parse_term_expr(lx, names);
  if (!lx.eof()) lx.fail("trailing input after term");
  return t;
}

}  // namespace proftree
