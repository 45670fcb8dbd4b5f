#pragma once

// Abstract clones at desk scale.  A clone presents, per arity n, a carrier
// of n-ary operations together with variables and substitution
//   subst : C_m x (C_n)^m -> C_n.
// Everything is driven through the Clone interface below; elements are
// closed values of the CloneElem variant (trees, function tables, monoid
// action elements, tuples, or intensional functions over another carrier).
//
// Concrete constructions: free clones of trees, endomorphism clones of a
// finite set, endomorphism clones of another clone's carrier (intensional),
// clones from monoid actions, finite products/powers, images of morphisms
// from free clones, and the arity shift (delta).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proftree/errors.hpp"
#include "proftree/tree.hpp"

namespace proftree {

class CloneElem;
using CloneElemFn = std::function<CloneElem(const std::vector<CloneElem>&)>;

class CloneElem {
public:
  enum class Kind { Tree, Table, Act, Tuple, Fn };

  static CloneElem tree(Tree t);
  // A function table over {0..q-1}^arity -> {0..q-1}, row-major with the
  // first argument most significant.
  static CloneElem table(int q, int arity, std::vector<int> tbl);
  static CloneElem act_state(int q);            // a constant from Q
  static CloneElem act_pair(int m, int var);    // (monoid element, variable)
  static CloneElem tuple(std::vector<CloneElem> comps);
  static CloneElem fn(int arity, CloneElemFn f);  // intensional

  Kind kind() const;
  const Tree& as_tree() const;
  int table_base() const;
  int table_arity() const;
  const std::vector<int>& as_table() const;
  bool act_is_state() const;
  int act_value() const;  // state index or monoid index
  int act_var() const;    // 1-based (pairs only)
  const std::vector<CloneElem>& as_tuple() const;
  int fn_arity() const;
  CloneElem fn_apply(const std::vector<CloneElem>& args) const;

private:
  struct Cell;
  explicit CloneElem(std::shared_ptr<const Cell> c) : cell_(std::move(c)) {}
  std::shared_ptr<const Cell> cell_;
};

// ---------------------------------------------------------------- clones ---

class Clone;
using ClonePtr = std::shared_ptr<const Clone>;

class Clone {
public:
  explicit Clone(std::uint64_t guard) : guard_(guard) {}
  virtual ~Clone() = default;

  virtual std::string describe() const = 0;
  virtual CloneElem variable(int n, int i) const = 0;  // 1 <= i <= n
  // head in C_m, args.size() == m, args in C_n; result in C_n.
  virtual CloneElem subst(int m, int n, const CloneElem& head,
                          const std::vector<CloneElem>& args) const = 0;
  // May throw GuardExceeded for intensional elements over large carriers.
  virtual bool equal(int n, const CloneElem& a, const CloneElem& b) const = 0;
  virtual std::optional<std::uint64_t> carrier_size(int n) const = 0;
  // Deterministic enumeration of the full carrier; throws GuardExceeded when
  // the carrier is unknown/infinite or exceeds the guard.
  virtual std::vector<CloneElem> enumerate(int n) const = 0;
  virtual std::string show(int n, const CloneElem& v) const;

  // Elements used by the law checker when the carrier is too large (or
  // infinite); the default truncates nothing and just defers to enumerate.
  virtual std::vector<CloneElem> law_samples(int n, int size_hint) const;

  std::uint64_t index_of(int n, const CloneElem& v) const;  // linear search
  std::uint64_t guard() const { return guard_; }

private:
  std::uint64_t guard_;
};

inline constexpr std::uint64_t kCloneGuard = 65536;

ClonePtr make_free_clone(RankedAlphabet sigma, std::uint64_t guard = kCloneGuard);
ClonePtr make_endo_clone(int q, std::uint64_t guard = kCloneGuard);
ClonePtr make_endo_carrier_clone(ClonePtr base, int m,
                                 std::uint64_t guard = kCloneGuard);
ClonePtr make_product_clone(std::vector<ClonePtr> comps,
                            std::uint64_t guard = kCloneGuard);
ClonePtr make_power_clone(ClonePtr base, int copies,
                          std::uint64_t guard = kCloneGuard);
ClonePtr make_delta_clone(ClonePtr base);

// --------------------------------------------------------- monoid actions ---

// A finite monoid M with unit/multiplication tables acting on a finite set Q.
struct MonoidAction {
  int m_size = 0, q_size = 0;
  int unit = 0;
  std::vector<int> mul;  // mul[a*m_size + b] = a.b
  std::vector<int> act;  // act[a*q_size + x] = a.x

  int times(int a, int b) const { return mul[static_cast<size_t>(a) * m_size + b]; }
  int apply(int a, int x) const { return act[static_cast<size_t>(a) * q_size + x]; }

  // Names of violated laws ("mul-assoc", "unit-left", "unit-right",
  // "act-unit", "act-compose"), each with a witness; empty when lawful.
  std::vector<std::pair<std::string, std::string>> violations() const;

  static MonoidAction z2_flip();  // Z/2 acting on a 2-element set by swapping
  static MonoidAction trivial(int q);  // one-element monoid on q points
};

// Throws ActionLawViolation on the first violated law.
ClonePtr make_action_clone(const MonoidAction& action,
                           std::uint64_t guard = kCloneGuard);
// No validation; exists so the law checker can be pointed at broken tables.
ClonePtr make_action_clone_unchecked(const MonoidAction& action,
                                     std::uint64_t guard = kCloneGuard);

// -------------------------------------------------------------- morphisms ---

// A clone morphism presented by its per-arity components.
struct CloneMorphism {
  ClonePtr source, target;
  std::string name;
  std::function<CloneElem(int n, const CloneElem&)> component;
};

// A morphism out of the free clone over sigma is a letter assignment:
// letters[j-1] is an element of target's carrier at arity(j).
struct FreeMorphism {
  RankedAlphabet sigma;
  ClonePtr target;
  std::vector<CloneElem> letters;

  // Structural fold of a tree with <= n variables.
  CloneElem eval(const Tree& t, int n) const;
  CloneMorphism as_morphism(std::string name = "") const;
};

// Every letter assignment, ordered with letter 1 most significant in the
// target's carrier enumeration orders.  Throws GuardExceeded when a needed
// carrier cannot be enumerated or the total count exceeds the guard.
std::vector<FreeMorphism> enumerate_morphisms(const RankedAlphabet& sigma,
                                              const ClonePtr& target);
std::optional<std::uint64_t> count_morphisms(const RankedAlphabet& sigma,
                                             const ClonePtr& target);

CloneElem eval_morphism(const FreeMorphism& p, const Tree& t, int n);

// Postcomposition phi . p of a free-source morphism with a morphism out of
// its target.
FreeMorphism compose(const CloneMorphism& phi, const FreeMorphism& p);

// The alphabet with the single letter of arity n; morphisms out of its free
// clone are in bijection with C_n (one letter image).
RankedAlphabet single_letter_alphabet(int n);
FreeMorphism element_as_morphism(const ClonePtr& c, int n, const CloneElem& v);

// cay^m : C -> Endo(C_m), sending c in C_n to the n-ary function
// (y_1..y_n) -> subst(c; y_1..y_n) on C_m.
CloneMorphism cay(const ClonePtr& c, int m);

// Applies an element F of Endo(C_n) at arity n to the tuple of variables of
// C at arity n; the retraction of postcomposition by cay^n.
CloneElem appvar(const ClonePtr& c, int n, const CloneElem& endo_elem);

// Image clone of a free-source morphism: carriers are the substitution
// closures of the letter images inside the target.
ClonePtr make_image_clone(const FreeMorphism& p, std::uint64_t guard = kCloneGuard);
// The two halves of the image factorization: p = inclusion . surjection.
CloneMorphism image_inclusion(const ClonePtr& image_clone);
FreeMorphism image_surjection(const ClonePtr& image_clone);

// The isomorphism delta(Endo(Q)) = Endo(Q)^Q and its inverse (an n+1-ary
// table is a Q-indexed tuple of n-ary tables, splitting on the last input).
std::pair<CloneMorphism, CloneMorphism> delta_endo_iso(int q,
                                                       std::uint64_t guard = kCloneGuard);

// ------------------------------------------------------------ law checks ---

struct LawFailure {
  std::string law;       // "unit", "projection", "associativity",
                         // "morphism-variables", "morphism-subst"
  std::string witness;   // rendered elements involved
};

struct LawCheckOptions {
  int max_arity = 2;
  // full cross product when the tuple space is at most this large
  std::uint64_t exhaustive_cap = 2'000'000;
  int samples = 2000;        // per law instance when sampling
  std::uint64_t seed = 42;
  int free_tree_size = 4;    // sample size hint for infinite carriers
};

struct LawCheckResult {
  bool pass = true;
  bool exhaustive = true;    // no law instance fell back to sampling
  std::uint64_t checked = 0;
  std::vector<LawFailure> failures;
  std::vector<std::string> notes;  // per-instance coverage descriptions
};

LawCheckResult check_clone_laws(const ClonePtr& c, const LawCheckOptions& opts = {});
LawCheckResult check_clone_morphism(const CloneMorphism& phi,
                                    const LawCheckOptions& opts = {});

}  // namespace proftree
