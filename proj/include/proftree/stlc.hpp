#pragma once

// Simply typed lambda calculus with one base type `o`, n-ary products
// (the empty product doubles as the unit type) and full beta-eta
// normalization.  Terms are nameless: variables are de Bruijn indices
// counted from the innermost binder, and every binder carries its domain
// type, so type reconstruction needs no inference.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "proftree/errors.hpp"

namespace proftree {

// ---------------------------------------------------------------- types ---

class Type {
public:
  enum class Kind { Base, Arrow, Product };

  Type();  // the base type `o`
  static Type base();
  static Type arrow(Type dom, Type cod);
  static Type product(std::vector<Type> comps);
  static Type unit();  // empty product

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_product() const { return kind() == Kind::Product; }
  bool is_unit() const { return is_product() && components().empty(); }

  const Type& dom() const;  // arrow only
  const Type& cod() const;
  const std::vector<Type>& components() const;  // product only

  bool operator==(const Type& other) const;  // structural; the only equality
  bool operator!=(const Type& other) const { return !(*this == other); }

private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  explicit Type(std::nullptr_t) {}  // bootstrap only; see Node
  std::shared_ptr<const Node> node_;
};

// Right-nested arrow type A -> A -> ... -> A -> cod with n copies of A.
Type fun_power(const Type& a, int n, const Type& cod);

std::string format_type(const Type& t);
// Grammar: `o`, `1`, `T -> T` (right associative), `(T)` grouping,
// `(T * T * ...)` products with an optional trailing `*` so that `(T *)`
// denotes the unary product.
Type parse_type(const std::string& text);

// ---------------------------------------------------------------- terms ---

class Term {
public:
  enum class Kind { Var, Lam, App, Tuple, Proj };

  static Term var(int index);                    // de Bruijn, 0 = innermost
  static Term lam(Type dom, Term body);
  static Term app(Term fn, Term arg);
  static Term tuple(std::vector<Term> comps);    // empty tuple = unit value
  static Term proj(Term subject, int index);     // 1-based component index
  static Term unit_value() { return tuple({}); }

  Kind kind() const;
  int index() const;                  // Var: de Bruijn index; Proj: component
  const Type& annotation() const;     // Lam
  const Term& body() const;           // Lam
  const Term& fn() const;             // App
  const Term& arg() const;            // App
  const std::vector<Term>& components() const;  // Tuple
  const Term& subject() const;        // Proj

  bool operator==(const Term& other) const;  // structural = alpha equality
  bool operator!=(const Term& other) const { return !(*this == other); }

private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Nameless terms are alpha-canonical, so alpha equivalence is structural.
inline bool alpha_eq(const Term& a, const Term& b) { return a == b; }

int term_size(const Term& t);  // number of AST nodes

// A typing context is the stack of binder types, outermost first; Var(i)
// refers to ctx[ctx.size() - 1 - i].
using TypeContext = std::vector<Type>;

// Throws TypeError / ScopeError.  `where` strings look like paths
// ("root.fn.body") so error messages point into the term.
Type typecheck(const TypeContext& ctx, const Term& t);

// Shift free variables >= cutoff by d (d may be negative).
Term shift(const Term& t, int d, int cutoff = 0);

// Capture-avoiding substitution of s for the variable with index `depth`;
// free variables above `depth` are shifted down by one.
Term substitute(const Term& t, int depth, const Term& s);

// Reduction guard: normalize throws GuardExceeded after this many
// contractions (diagnostic only; the calculus is strongly normalizing).
inline constexpr std::uint64_t kDefaultStepGuard = 10'000'000;

// Beta-normal eta-long canonical form.  Two well-typed terms are
// beta-eta-convertible iff their canonical forms are structurally equal.
Term normalize(const TypeContext& ctx, const Term& t,
               std::uint64_t step_guard = kDefaultStepGuard);

// Contracts the `which`-th beta/projection redex (in preorder); returns
// false if the term has fewer redexes.  Used by convertibility tests.
bool contract_redex(const Term& t, int which, Term* out);
int count_redexes(const Term& t);

std::string format_term(const Term& t);
// Grammar: `\x:T. M` (body extends right), application by juxtaposition
// (left associative), `<M, ...>` tuples, `M.i` projection, `()` unit,
// `(M)` grouping.  Only closed terms parse; free names are ScopeErrors.
Term parse_term(const std::string& text);

}  // namespace proftree
