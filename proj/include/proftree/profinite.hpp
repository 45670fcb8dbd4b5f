#pragma once

// Families over a finite roster of clones.  A natural family assigns to
// every roster clone a table over the letter assignments into it, naturally
// in generated morphisms between roster members.  Restricting to the
// endofunction members gives a family of semantic values, lifting goes back
// through evaluation at carrier sets, and parametric families tie both to
// the logical relations of the finite semantics.  Every verdict here is
// roster-relative: the roster stands in for the class of all locally finite
// clones, which no finite check can exhaust.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proftree/church.hpp"
#include "proftree/clone.hpp"
#include "proftree/sem.hpp"
#include "proftree/stlc.hpp"
#include "proftree/tree.hpp"

namespace proftree {

// ------------------------------------------------------------- the roster ---

struct RosterMember {
  enum class Kind { Plain, Endo, Product, Image, EndoCarrier, DeltaEndo, PowerEndo };

  std::string name;
  ClonePtr clone;
  Kind kind = Kind::Plain;
  int param = 0;            // Endo/DeltaEndo/PowerEndo: base size; EndoCarrier: arity
  int parent = -1;          // Image/EndoCarrier/Product: member indices involved
  std::vector<int> factors; // Product only
};

// Construction records enough provenance to generate the naturality edges:
// projections out of products, inclusions out of images, the evaluation
// morphisms into endo-carrier members, and the arity-shift isomorphism pair.
struct CloneRoster {
  std::vector<RosterMember> members;

  int add_plain(std::string name, ClonePtr clone);
  int add_endo(int q, std::uint64_t guard = kCloneGuard);
  int add_action(std::string name, const MonoidAction& action,
                 std::uint64_t guard = kCloneGuard);
  int add_image(std::string name, const FreeMorphism& p, int parent,
                std::uint64_t guard = kCloneGuard);
  int add_product(int i, int j, std::uint64_t guard = kCloneGuard);
  // Endo over the parent's arity-m carrier; the target of cay^m.
  int add_endo_carrier(int parent, int m, std::uint64_t guard = kCloneGuard);
  // Adds delta(Endo(q)) and Endo(q)^q; returns the index of the former.
  int add_delta_pair(int q, std::uint64_t guard = kCloneGuard);

  int find(const std::string& name) const;  // -1 when absent
  int size() const { return static_cast<int>(members.size()); }

  // Endo(1), Endo(2), Endo(3), the two-element swap action, and the image
  // of the single unary letter mapped to that swap inside Endo(2).
  static CloneRoster standard(std::uint64_t guard = kCloneGuard);
};

struct RosterEdge {
  int source = 0, target = 0;
  CloneMorphism phi;
};

// Identity per member plus every structural morphism the provenance yields.
std::vector<RosterEdge> roster_edges(const CloneRoster& roster);

// -------------------------------------------------------- natural families ---

// tables[i] is indexed by the canonical enumeration of letter assignments
// into member i; each entry lives in that member's arity-n carrier.
struct NaturalFamily {
  RankedAlphabet sigma;
  int n = 0;
  std::shared_ptr<const CloneRoster> roster;
  std::vector<std::vector<CloneElem>> tables;
};

// Precomposition with t: the table at C sends p to the fold of t along p.
NaturalFamily family_of_tree(const RankedAlphabet& sigma, int n, const Tree& t,
                             std::shared_ptr<const CloneRoster> roster);

// One tree per member; the seam between different trees is exactly what
// naturality_check is meant to catch.
NaturalFamily family_from_trees(const RankedAlphabet& sigma, int n,
                                const std::vector<Tree>& per_member,
                                std::shared_ptr<const CloneRoster> roster);

bool families_equal(const NaturalFamily& a, const NaturalFamily& b);

struct NaturalityFailure {
  std::string edge;      // morphism name with member names
  std::string morphism;  // the letter assignment the square fails at
  std::string detail;    // both sides, rendered by the target clone
};

struct NaturalityReport {
  bool pass = true;
  std::uint64_t squares_checked = 0;
  std::vector<NaturalityFailure> failures;  // capped per edge
};

NaturalityReport naturality_check(const NaturalFamily& u,
                                  std::size_t max_failures_per_edge = 5);

// Least tree (size first, then the canonical tree order) whose family equals
// u on the whole roster; nullopt means inconclusive at this bound, never a
// negative answer.
std::optional<Tree> definability_search(const NaturalFamily& u, int size_bound);

// --------------------------------------------- profinite term approximants ---

// Components at the endofunction members, as semantic values of the
// letter-tuple-to-function type; the rule, when present, extends the family
// intensionally to arbitrary base sizes (lifting needs it).
struct ProfiniteTermApprox {
  RankedAlphabet sigma;
  int n = 0;
  std::vector<int> base_sizes;
  std::vector<SemValue> components;
  std::function<SemValue(int)> rule;
};

// theta_Q := the u-table at Endo(Q), transported along the letter-assignment
// bijection.  Throws MissingRosterMember when the roster has no endo member.
ProfiniteTermApprox restrict_family(const NaturalFamily& u);

// Intensional approximants from a closed term of the context type, or from
// the encoding of a tree.
ProfiniteTermApprox approx_from_term(const RankedAlphabet& sigma, int n,
                                     const Term& m, std::vector<int> base_sizes);
ProfiniteTermApprox approx_from_tree(const RankedAlphabet& sigma, int n,
                                     const Tree& t, std::vector<int> base_sizes);

// u_C(p) = appvar(theta at the carrier set C_n, applied to cay^n . p).
// Requires an intensional rule; roster tables alone cannot reach the carrier
// sets this evaluates at.
NaturalFamily lift(const ProfiniteTermApprox& theta,
                   std::shared_ptr<const CloneRoster> roster,
                   std::uint64_t guard = kDefaultGuard);

// Componentwise extensional equality at each shared base size.
bool approx_equal(const ProfiniteTermApprox& a, const ProfiniteTermApprox& b,
                  std::uint64_t guard = kDefaultGuard);

// ------------------------------------------------------ parametric families ---

struct ParametricFamily {
  Type type;
  std::vector<int> base_sizes;
  std::function<SemValue(int)> rule;
};

ParametricFamily parametric_from_term(const Term& m, std::vector<int> base_sizes);
ParametricFamily parametric_from_tree(const RankedAlphabet& sigma, int n,
                                      const Tree& t, std::vector<int> base_sizes);

// Splits a family of product-target type along its components.
std::vector<ParametricFamily> split_components(const ParametricFamily& rho);

struct ParametricityFailure {
  int left_base = 0, right_base = 0;
  std::string relation;
};

struct ParametricityReport {
  bool pass = true;
  std::uint64_t relations_checked = 0;
  std::vector<ParametricityFailure> failures;
};

// (rho_Q, rho_Q') must lie in the relational lifting of the type for every
// relation between roster base sizes, both orders, every subset.  Unary
// predicates ride along whenever 1 is among the base sizes.
ParametricityReport parametricity_check(const ParametricFamily& rho,
                                        std::size_t max_failures = 5,
                                        std::uint64_t guard = kDefaultGuard);

struct FixedPointReport {
  bool pass = true;
  int q = 0;
  std::uint64_t expansion_size = 0;  // the carrier the family is re-run at
  std::string witness;               // first separating letter tuple, if any
};

// The one-step unfolding identity: running the family at the function space
// over q, on the tuple of generator denotations, must reproduce the family
// at q itself.  rho must have the letter-tuple-to-base type for sigma.
FixedPointReport fixed_point_check(const ParametricFamily& rho,
                                   const RankedAlphabet& sigma, int q,
                                   std::uint64_t guard = kDefaultGuard);

// Least tree whose encoding denotes rho at every roster base size.
std::optional<Tree> parametric_to_tree(const ParametricFamily& rho,
                                       const RankedAlphabet& sigma, int n,
                                       int size_bound,
                                       std::uint64_t guard = kDefaultGuard);

}  // namespace proftree
