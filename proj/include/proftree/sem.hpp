#pragma once

// Finite-set semantics of the simply typed calculus: the base type denotes
// a finite set Q = {0..q-1}, arrows denote full function spaces, products
// denote cartesian products.  Denotations of function type are carried
// intensionally (a closure plus a memo table); extensional equality and
// enumeration are guarded so that oversized spaces raise GuardExceeded
// instead of being silently sampled.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "proftree/errors.hpp"
#include "proftree/stlc.hpp"

namespace proftree {

inline constexpr std::uint64_t kDefaultGuard = 65536;

class SemValue {
public:
  enum class Kind { Base, Tuple, Fn };

  static SemValue base(int q);
  static SemValue tuple(std::vector<SemValue> comps);
  static SemValue unit() { return tuple({}); }
  static SemValue fn(std::function<SemValue(const SemValue&)> apply);

  Kind kind() const;
  int base_elem() const;
  const std::vector<SemValue>& components() const;
  SemValue apply(const SemValue& arg) const;  // memoized

  // Structural key: identifies Base/Tuple values up to equality, function
  // values only up to cell identity.  Used for memoization and debugging.
  std::string key() const;

  // Sorted (arg key -> result key) pairs recorded by the memo table; the
  // observable graph of an intensional function value.
  std::vector<std::pair<std::string, std::string>> observed_graph() const;

private:
  struct Cell;
  explicit SemValue(std::shared_ptr<Cell> c) : cell_(std::move(c)) {}
  std::shared_ptr<Cell> cell_;
};

// ----------------------------------------------------------- the domain ---

// Cardinality of the denotation of `ty` over a q-element base; nullopt when
// the count overflows 64 bits (always treated as "beyond any guard").
std::optional<std::uint64_t> domain_card(const Type& ty, int q);

// Deterministic enumeration: base elements ascending; products
// lexicographically with the first component most significant; functions as
// codomain tuples indexed by the enumerated domain, first point most
// significant.  Throws GuardExceeded when the cardinality exceeds `guard`.
std::vector<SemValue> enumerate_domain(const Type& ty, int q,
                                       std::uint64_t guard = kDefaultGuard);

// Position of `v` in enumerate_domain's order / its inverse.
std::uint64_t domain_index(const Type& ty, int q, const SemValue& v,
                           std::uint64_t guard = kDefaultGuard);
SemValue domain_at(const Type& ty, int q, std::uint64_t index,
                   std::uint64_t guard = kDefaultGuard);

// Extensional equality; function spaces are compared pointwise over the
// enumerated domain (guarded).
bool sem_equal(const Type& ty, int q, const SemValue& a, const SemValue& b,
               std::uint64_t guard = kDefaultGuard);

// "(<type>, |Q|=q, #index)" when indexable under the guard, otherwise an
// intensional marker with the function's observed graph.
std::string describe_value(const Type& ty, int q, const SemValue& v,
                           std::uint64_t guard = kDefaultGuard);

// -------------------------------------------------------- interpretation ---

// Environment: one value per context entry, outermost first (parallel to
// TypeContext).  The term must typecheck in the corresponding context.
SemValue interp_term(const Term& t, int q, const std::vector<SemValue>& env = {});

// ------------------------------------------------------ logical relations ---

// A binary relation between bases of sizes `left` and `right`, stored as a
// membership matrix in row-major order (row = left element).
struct FinRelation {
  int left = 0, right = 0;
  std::vector<char> matrix;  // size left*right

  static FinRelation empty(int l, int r);
  static FinRelation identity(int n);
  static FinRelation from_pairs(int l, int r,
                                const std::vector<std::pair<int, int>>& pairs);
  static FinRelation from_mask(int l, int r, std::uint64_t mask);

  bool contains(int a, int b) const {
    return matrix[static_cast<size_t>(a) * right + b] != 0;
  }
  void set(int a, int b, bool on = true) {
    matrix[static_cast<size_t>(a) * right + b] = on ? 1 : 0;
  }
  std::string describe() const;
};

// All 2^(l*r) relations in mask order; refuses (GuardExceeded) when l*r > 12.
std::vector<FinRelation> enumerate_relations(int l, int r);

// Membership in the logical relation lifted to `ty`: base pairs must lie in
// R, functions must map related arguments to related results, products are
// componentwise.
bool rel_member(const Type& ty, const FinRelation& r, const SemValue& left,
                const SemValue& right, std::uint64_t guard = kDefaultGuard);

// The fundamental lemma instance for a closed term: its denotations over the
// two bases are related at the term's type.
bool fundamental_lemma_check(const Term& t, const FinRelation& r,
                             std::uint64_t guard = kDefaultGuard);

}  // namespace proftree
