#pragma once

// Trees as closed simply typed terms.  A ranked alphabet becomes a product
// type of operation arguments, and a tree with at most n variables becomes
// the closed term that folds any interpretation of the letters over it.
// Encoding lands in canonical form by construction; decoding normalizes
// first and then reads the spine back off.  The same letter-tuple type also
// carries the finite semantics of an alphabet, which is where letter
// assignments into function clones and denotations meet.

#include <cstdint>
#include <vector>

#include "proftree/clone.hpp"
#include "proftree/sem.hpp"
#include "proftree/stlc.hpp"
#include "proftree/tree.hpp"

namespace proftree {

// Product of one component per letter: arity a contributes o -> ... -> o
// with a arguments.  Empty alphabets give the empty product.
Type alphabet_type(const RankedAlphabet& sigma);

// alphabet_type(sigma) -> o -> ... -> o -> o with vars argument positions.
Type church_type(const RankedAlphabet& sigma, int vars);

struct ChurchContext {
  RankedAlphabet sigma;
  int vars = 0;
  Type type;

  static ChurchContext make(RankedAlphabet sigma, int vars);
};

// The canonical closed term of church_type folding t: binds the letter
// tuple, then each variable, and maps node(j, cs) to the j-th projection
// applied to the folded children.  Validates t against the context first.
Term encode(const ChurchContext& cc, const Tree& t);

// Inverse on well-typed terms: typechecks (anything ill-typed or of the
// wrong type raises NotChurchTyped), normalizes, and reads the tree back.
Tree decode(const ChurchContext& cc, const Term& m);

// (sigma -> o)^arity(i) -> sigma -> o
Type generator_type(const RankedAlphabet& sigma, int i);

// The term \t. \s. s.i (t.1 s) ... (t.k s) for letter i of arity k, returned
// in canonical form (the letter-tuple arguments eta-expand).
Term generator(const RankedAlphabet& sigma, int i);

// Composition at the term level: head expects m tree arguments, each args[j]
// expects n, and all share one letter tuple.  Returns the normal form of
//   \s. \x1..xn. head s (args[1] s x..) ... (args[m] s x..)
Term kleisli_subst(const RankedAlphabet& sigma, const Term& head, int m,
                   const std::vector<Term>& args, int n);

// A function table over {0..q-1} as the curried semantic value of type
// o -> ... -> o, and back.  Tables are row-major with the first argument
// most significant, matching both the clone carriers and domain enumeration.
SemValue sem_of_table(int q, int arity, const std::vector<int>& tbl);
std::vector<int> table_of_sem(int q, int arity, const SemValue& v,
                              std::uint64_t guard = kDefaultGuard);

// Letter assignments into the endofunction clone over q points are exactly
// the points of the alphabet type's semantics: componentwise table <-> value.
SemValue morphism_to_semantics(const FreeMorphism& p, int q);
FreeMorphism semantics_to_morphism(const RankedAlphabet& sigma, int q,
                                   const SemValue& letters);

struct SubstitutionBijection {
  RankedAlphabet sigma;
  int q = 0;

  SemValue to_semantics(const FreeMorphism& p) const;
  FreeMorphism to_morphism(const SemValue& letters) const;
};

// Checks the semantic side stays enumerable under the guard before handing
// out the conversion pair.
SubstitutionBijection substitution_bijection(const RankedAlphabet& sigma,
                                             int q,
                                             std::uint64_t guard = kDefaultGuard);

// Tabulates the denotation of an encoded tree against a letter assignment:
// interpret m over q points, apply to the letter tuple of p, and read off
// the resulting function of the tree variables.
std::vector<int> church_table(const ChurchContext& cc, const Term& m,
                              const FreeMorphism& p, int q,
                              std::uint64_t guard = kDefaultGuard);

}  // namespace proftree
