#pragma once

// Signatures as functors from finite ordinals to sets: a signature assigns
// to each arity n a finite set X_n of n-ary generators plus a renaming
// action X_f : X_m -> X_n for every function f : [m] -> [n].  Most of the
// module works in the coproduct-of-representables form (a list of arities,
// one summand y_a per generator), where composition has a closed form and
// every bijection can be exhibited as an explicit map on canonical labels.
// The tabulated form stores the sets and actions on a bounded grid and is
// what `sigset` and the brute-force counters consume.
//
// The second half encodes two-sorted sets (Q, A) as signatures, the
// semidirect tensor on such pairs, and monoid objects for that tensor;
// `action_roundtrip` checks that a monoid action and its monoid object
// determine each other table-for-table.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "proftree/clone.hpp"
#include "proftree/errors.hpp"
#include "proftree/tree.hpp"

namespace proftree {

class Signature {
public:
  // One summand y_a per entry; summand order is part of the identity of the
  // signature (element labels are tagged pairs, not a quotient).
  static Signature representables(std::vector<int> arities);
  static Signature representable(int arity);
  static Signature unit();      // y1, the unit of composition
  static Signature constant();  // y0, one generator of arity 0
  static Signature none();      // empty coproduct
  static Signature from_alphabet(const RankedAlphabet& sigma);

  // Evaluate any signature on the grid 0..bound and store the result.
  static Signature tabulate(const Signature& x, int bound);
  // Raw tabulated form: sizes[n] = |X_n| for n <= bound, and
  // tables[m][n][f] maps X_m into X_n where f indexes a function
  // [m] -> [n] (first coordinate most significant).  Shapes are validated;
  // functoriality is not (see functoriality_ok).
  static Signature
  tabulated(std::vector<std::uint64_t> sizes,
            std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>>
                tables);

  bool representable_form() const { return representable_; }
  const std::vector<int>& arities() const;  // representable form only
  int summand_count() const;                // representable form only
  int grid_bound() const;                   // tabulated form only

  std::uint64_t size_at(int n) const;
  // The renaming action; f[k] in [0, n) for k in [0, m).
  std::uint64_t act(int m, int n, const std::vector<int>& f,
                    std::uint64_t elem) const;

  // Representable form: elements of X_n are pairs (summand, pick) with
  // pick : [a_summand] -> [n]; the linear index runs summand-major with the
  // first pick coordinate most significant.
  std::pair<int, std::vector<int>> decode(int n, std::uint64_t elem) const;
  std::uint64_t encode(int n, int summand, const std::vector<int>& pick) const;

  std::string describe() const;
  std::string describe_element(int n, std::uint64_t elem) const;

private:
  Signature() = default;
  bool representable_ = true;
  std::vector<int> arities_;
  // tabulated form
  std::vector<std::uint64_t> sizes_;
  std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> tables_;
};

// All functions [m] -> [n] in canonical order, and the index of one.
std::vector<std::vector<int>> all_functions(int m, int n);
std::uint64_t function_index(int n, const std::vector<int>& f);

// X_id = id and X_{g.f} = X_g . X_f for all m, n, p <= bound.
bool functoriality_ok(const Signature& x, int bound);

// --- composition -----------------------------------------------------------

// (X . X')_n would be the set of formal expressions x(x'_1, ..., x'_m) with
// x an m-ary generator of X; in representable form this collapses to a fresh
// coproduct with one summand per (left summand, tuple of right summands),
// of arity "sum of the tuple's arities".  `provenance` records that pair
// for each composite summand, in order (left-major, tuple odometer with the
// first position most significant).
struct ComposedSummand {
  int left = 0;
  std::vector<int> right;
};
struct Composite {
  Signature sig;
  std::vector<ComposedSummand> provenance;
};
Composite compose_with_provenance(const Signature& x, const Signature& xp);
// Throws UnsupportedOperation unless both inputs are representable form.
Signature compose_signatures(const Signature& x, const Signature& xp);

// --- natural maps on a bounded grid ----------------------------------------

struct GridMap {
  int bound = 0;
  std::vector<std::vector<std::uint64_t>> images;  // images[n][elem]
};
bool grid_map_bijective(const Signature& src, const Signature& dst,
                        const GridMap& gm);
bool grid_map_natural(const Signature& src, const Signature& dst,
                      const GridMap& gm);

// Explicit witnesses for the structural laws of composition, as maps out of
// the literal composite (never assumed to be identities):
GridMap unit_left_iso(const Signature& x, int bound);    // y1.X  -> X
GridMap unit_right_iso(const Signature& x, int bound);   // X.y1  -> X
GridMap absorb_left_iso(const Signature& x, int bound);  // y0.X  -> y0

// --- two-sorted sets and the semidirect tensor ------------------------------

struct PointedPair {
  int q = 0;  // first carrier (states)
  int a = 0;  // second carrier (letters)
  bool operator==(const PointedPair&) const = default;
};

// (Q, A) x (R, B) = (Q + A*R, A*B).  First-carrier labels: x < Q is the
// state x, otherwise x encodes the pair (a, r) with a = (x-Q)/R major.
// Second-carrier labels: x encodes (a, b) with a major.
PointedPair semidirect(PointedPair p, PointedPair r);
std::string semidirect_state_label(PointedPair p, PointedPair r, int x);
std::string semidirect_letter_label(PointedPair p, PointedPair r, int x);

// Q generators of arity 0 followed by A generators of arity 1.
Signature setsig(PointedPair p);
// The pair construction (X_0, X_0 + X_1) as stated alongside setsig.
PointedPair sigset(const Signature& x);
// The pair (X_0, X_1).  This is the form that actually satisfies the
// hom-count identity below; see adjunction_count.
PointedPair sigset_adjoint(const Signature& x);

// |maps p -> r in two-sorted sets| = r.q^p.q * r.a^p.a.
std::uint64_t set_pair_hom_count(PointedPair p, PointedPair r);

// Count natural transformations x -> y restricted to the grid 0..bound by
// filtering every family of per-arity functions (GuardExceeded if the
// candidate space exceeds `guard`), and by the generator-image product
// (x must be representable).  The two must agree whenever both apply.
std::uint64_t natural_transformation_count(const Signature& x,
                                           const Signature& y, int bound,
                                           std::uint64_t guard = 200000);
std::uint64_t natural_transformation_count_formula(const Signature& x,
                                                   const Signature& y);

struct AdjunctionCount {
  std::uint64_t sig_side = 0;           // maps setsig(p) -> X
  std::uint64_t adjoint_side = 0;       // maps p -> (X_0, X_1)
  std::uint64_t construction_side = 0;  // maps p -> (X_0, X_0 + X_1)
};
// sig_side always equals adjoint_side; construction_side differs as soon as
// X_0 and p.a are both nonempty, which is why the adjoint form is the one
// asserted in tests and the construction form is reported informationally.
AdjunctionCount adjunction_count(PointedPair p, const Signature& x);

// The coherence bijection setsig(p) . setsig(r) -> setsig(p x r); a summand
// permutation in representable form, verified bijective and natural.
GridMap setsig_coherence(PointedPair p, PointedPair r, int bound);

// --- iterated one-step unfolding --------------------------------------------

// Stage `depth` of S(0) = empty, S(k+1) = variables + one layer of letters
// over S(k), with the stage-1 convention S(1) = variables only.  The
// elements are returned as the trees they denote, in iteration order
// (variables first, then letter-major with the first child most
// significant); stage d is exactly the set of trees of height < d, which is
// what the agreement test against the tree enumerator checks.
std::vector<Tree> free_iteration(const RankedAlphabet& sigma, int depth,
                                 int n, std::uint64_t guard = kCloneGuard);

// --- monoid objects for the semidirect tensor --------------------------------

// A morphism of two-sorted sets, as explicit tables.
struct SetPairMap {
  PointedPair dom, cod;
  std::vector<int> first, second;
  bool operator==(const SetPairMap&) const = default;
};
SetPairMap identity_map(PointedPair p);
SetPairMap compose(const SetPairMap& g, const SetPairMap& f);
// phi x psi on the semidirect tensor of the domains/codomains.
SetPairMap tensor(const SetPairMap& phi, const SetPairMap& psi);
SetPairMap left_unitor(PointedPair p);   // (0,1) x p -> p
SetPairMap right_unitor(PointedPair p);  // p x (0,1) -> p
// ((p x r) x s) -> (p x (r x s)), explicit on labels.
SetPairMap associator(PointedPair p, PointedPair r, PointedPair s);

struct MonoidObject {
  PointedPair carrier;  // (states, monoid elements)
  SetPairMap unit;      // (0,1) -> carrier
  SetPairMap mult;      // carrier x carrier -> carrier
};

// The monoid object induced by a monoid action: unit picks the monoid unit,
// mult is [states fixed | the action] on the first carrier and the monoid
// multiplication on the second.
MonoidObject action_to_monoid_object(const MonoidAction& ma);
// Extract the (unit, action, multiplication) tables back out of a monoid
// object on (Q, M); the state part of mult.first is reported separately by
// action_roundtrip since a lawful object forces it to be the identity.
MonoidAction monoid_object_to_action(const MonoidObject& mo);

struct MonoidObjectLaws {
  bool left_unit = false;
  bool right_unit = false;
  bool assoc = false;
  std::vector<std::string> failures;
  bool pass() const { return left_unit && right_unit && assoc; }
};
// Evaluate the three diagrams elementwise (works on unlawful input too).
MonoidObjectLaws monoid_object_laws(const MonoidObject& mo);

struct ActionRoundtrip {
  bool pass = false;
  MonoidObjectLaws laws;
  bool states_fixed = false;   // mult.first restricted to states is identity
  bool tables_match = false;   // extracted tables equal the input bit for bit
  LawCheckResult clone_laws;   // the induced clone passes the law checker
  std::vector<std::string> notes;
};
// Throws ActionLawViolation (naming the failing law) if `ma` is not a
// lawful action; otherwise builds the monoid object, checks its diagrams,
// extracts the tables back, and runs the clone law checker.
ActionRoundtrip action_roundtrip(const MonoidAction& ma);

}  // namespace proftree
