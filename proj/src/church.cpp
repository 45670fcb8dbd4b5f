#include "proftree/church.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "proftree/errors.hpp"

namespace proftree {

namespace {

// Decode only runs the spine reader on normal forms of the context type, so
// a malformed shape here means the normalizer broke, not bad user input.
[[noreturn]] void impossible(const std::string& what) {
  throw std::logic_error("decode: normal form violates its type: " + what);
}

std::uint64_t pow_or_throw(std::uint64_t b, int e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > cap / b) throw GuardExceeded(UINT64_MAX, cap);
    r *= b;
  }
  return r;
}

}  // namespace

Type alphabet_type(const RankedAlphabet& sigma) {
  std::vector<Type> comps;
  comps.reserve(sigma.arities.size());
  for (int a : sigma.arities)
    comps.push_back(fun_power(Type::base(), a, Type::base()));
  return Type::product(std::move(comps));
}

Type church_type(const RankedAlphabet& sigma, int vars) {
  return Type::arrow(alphabet_type(sigma),
                     fun_power(Type::base(), vars, Type::base()));
}

ChurchContext ChurchContext::make(RankedAlphabet sigma, int vars) {
  if (vars < 0) throw IndexOutOfRange("variable count must be nonnegative");
  Type ty = church_type(sigma, vars);
  return ChurchContext{std::move(sigma), vars, std::move(ty)};
}

Term encode(const ChurchContext& cc, const Tree& t) {
  validate_tree(cc.sigma, cc.vars, t);
  const int n = cc.vars;
  // Under the binders the letter tuple sits at index n and x_i at n - i.
  std::function<Term(const Tree&)> fold = [&](const Tree& u) -> Term {
    if (u.is_variable()) return Term::var(n - u.var_index());
    Term spine = Term::proj(Term::var(n), u.letter());
    for (const Tree& c : u.children()) spine = Term::app(spine, fold(c));
    return spine;
  };
  Term body = fold(t);
  for (int i = 0; i < n; ++i) body = Term::lam(Type::base(), std::move(body));
  return Term::lam(alphabet_type(cc.sigma), std::move(body));
}

Tree decode(const ChurchContext& cc, const Term& m) {
  Type ty;
  try {
    ty = typecheck({}, m);
  } catch (const TypeError& e) {
    throw NotChurchTyped(std::string("term does not typecheck: ") + e.what());
  } catch (const ScopeError& e) {
    throw NotChurchTyped(std::string("term is not closed: ") + e.what());
  }
  if (!(ty == cc.type))
    throw NotChurchTyped("term has type " + format_type(ty) + ", expected " +
                         format_type(cc.type));

  const Term nf = normalize({}, m);
  const int n = cc.vars;
  const Term* body = &nf;
  for (int k = 0; k <= n; ++k) {
    if (body->kind() != Term::Kind::Lam) impossible("missing binder");
    body = &body->body();
  }

  std::function<Tree(const Term&)> read = [&](const Term& u) -> Tree {
    std::vector<const Term*> args;
    const Term* head = &u;
    while (head->kind() == Term::Kind::App) {
      args.push_back(&head->arg());
      head = &head->fn();
    }
    if (head->kind() == Term::Kind::Var) {
      if (!args.empty()) impossible("applied variable of base type");
      if (head->index() >= n) impossible("letter tuple used as a tree");
      return Tree::variable(n - head->index());
    }
    if (head->kind() != Term::Kind::Proj) impossible("unexpected spine head");
    const Term& subj = head->subject();
    if (subj.kind() != Term::Kind::Var || subj.index() != n)
      impossible("projection off something other than the letter tuple");
    const int letter = head->index();
    const int arity = cc.sigma.arity(letter);
    if (static_cast<int>(args.size()) != arity) impossible("letter arity");
    std::vector<Tree> children;
    children.reserve(args.size());
    for (auto it = args.rbegin(); it != args.rend(); ++it)
      children.push_back(read(**it));
    return Tree::node(letter, std::move(children));
  };
  return read(*body);
}

Type generator_type(const RankedAlphabet& sigma, int i) {
  const int a = sigma.arity(i);
  const Type tree_ty = Type::arrow(alphabet_type(sigma), Type::base());
  return Type::arrow(Type::product(std::vector<Type>(a, tree_ty)),
                     Type::arrow(alphabet_type(sigma), Type::base()));
}

Term generator(const RankedAlphabet& sigma, int i) {
  const int a = sigma.arity(i);
  const Type sig_ty = alphabet_type(sigma);
  const Type tree_ty = Type::arrow(sig_ty, Type::base());
  // t at index 1 under the letter-tuple binder, the tuple itself at 0.
  Term spine = Term::proj(Term::var(0), i);
  for (int k = 1; k <= a; ++k)
    spine = Term::app(std::move(spine),
                      Term::app(Term::proj(Term::var(1), k), Term::var(0)));
  Term g = Term::lam(Type::product(std::vector<Type>(a, tree_ty)),
                     Term::lam(sig_ty, std::move(spine)));
  return normalize({}, g);
}

Term kleisli_subst(const RankedAlphabet& sigma, const Term& head, int m,
                   const std::vector<Term>& args, int n) {
  if (static_cast<int>(args.size()) != m)
    throw ArityMismatch("expected " + std::to_string(m) + " arguments, got " +
                        std::to_string(args.size()));
  if (n < 0) throw IndexOutOfRange("variable count must be nonnegative");
  Term spine = Term::app(shift(head, n + 1), Term::var(n));
  for (const Term& arg : args) {
    Term ai = Term::app(shift(arg, n + 1), Term::var(n));
    for (int i = 1; i <= n; ++i) ai = Term::app(std::move(ai), Term::var(n - i));
    spine = Term::app(std::move(spine), std::move(ai));
  }
  for (int i = 0; i < n; ++i) spine = Term::lam(Type::base(), std::move(spine));
  return normalize({}, Term::lam(alphabet_type(sigma), std::move(spine)));
}

namespace {

struct TableFn {
  int q;
  int arity;
  std::shared_ptr<const std::vector<int>> tbl;

  SemValue at(int depth, std::uint64_t idx) const {
    if (depth == arity) return SemValue::base((*tbl)[idx]);
    TableFn self = *this;
    return SemValue::fn([self, depth, idx](const SemValue& x) {
      const int e = x.base_elem();
      if (e < 0 || e >= self.q)
        throw IndexOutOfRange("argument outside the base set");
      return self.at(depth + 1, idx * static_cast<std::uint64_t>(self.q) + e);
    });
  }
};

}  // namespace

SemValue sem_of_table(int q, int arity, const std::vector<int>& tbl) {
  if (q <= 0) throw IndexOutOfRange("base set must be nonempty");
  if (arity < 0) throw IndexOutOfRange("arity must be nonnegative");
  const std::uint64_t want = pow_or_throw(q, arity, UINT64_MAX / 2);
  if (tbl.size() != want)
    throw ArityMismatch("table has " + std::to_string(tbl.size()) +
                        " entries, expected " + std::to_string(want));
  for (int e : tbl)
    if (e < 0 || e >= q) throw IndexOutOfRange("table entry outside base set");
  TableFn f{q, arity, std::make_shared<const std::vector<int>>(tbl)};
  return f.at(0, 0);
}

std::vector<int> table_of_sem(int q, int arity, const SemValue& v,
                              std::uint64_t guard) {
  if (q <= 0) throw IndexOutOfRange("base set must be nonempty");
  if (arity < 0) throw IndexOutOfRange("arity must be nonnegative");
  const std::uint64_t total = pow_or_throw(q, arity, guard);
  if (total > guard) throw GuardExceeded(total, guard);
  std::vector<int> out;
  out.reserve(total);
  std::vector<int> tuple(arity, 0);
  for (std::uint64_t row = 0; row < total; ++row) {
    std::uint64_t rest = row;
    for (int k = arity - 1; k >= 0; --k) {
      tuple[k] = static_cast<int>(rest % q);
      rest /= q;
    }
    SemValue cur = v;
    for (int k = 0; k < arity; ++k) cur = cur.apply(SemValue::base(tuple[k]));
    out.push_back(cur.base_elem());
  }
  return out;
}

SemValue morphism_to_semantics(const FreeMorphism& p, int q) {
  if (static_cast<int>(p.letters.size()) !=
      static_cast<int>(p.sigma.arities.size()))
    throw ArityMismatch("letter assignment does not cover the alphabet");
  std::vector<SemValue> comps;
  comps.reserve(p.letters.size());
  for (std::size_t j = 0; j < p.letters.size(); ++j) {
    const CloneElem& e = p.letters[j];
    if (e.table_base() != q)
      throw ArityMismatch("letter table over the wrong base set");
    if (e.table_arity() != p.sigma.arities[j])
      throw ArityMismatch("letter table of the wrong arity");
    comps.push_back(sem_of_table(q, e.table_arity(), e.as_table()));
  }
  return SemValue::tuple(std::move(comps));
}

FreeMorphism semantics_to_morphism(const RankedAlphabet& sigma, int q,
                                   const SemValue& letters) {
  const auto& comps = letters.components();
  if (comps.size() != sigma.arities.size())
    throw ArityMismatch("letter tuple does not cover the alphabet");
  std::vector<CloneElem> elems;
  elems.reserve(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j)
    elems.push_back(CloneElem::table(
        q, sigma.arities[j], table_of_sem(q, sigma.arities[j], comps[j])));
  return FreeMorphism{sigma, make_endo_clone(q), std::move(elems)};
}

SemValue SubstitutionBijection::to_semantics(const FreeMorphism& p) const {
  if (p.sigma.arities != sigma.arities)
    throw ArityMismatch("morphism is over a different alphabet");
  return morphism_to_semantics(p, q);
}

FreeMorphism SubstitutionBijection::to_morphism(const SemValue& letters) const {
  return semantics_to_morphism(sigma, q, letters);
}

SubstitutionBijection substitution_bijection(const RankedAlphabet& sigma,
                                             int q, std::uint64_t guard) {
  if (q <= 0) throw IndexOutOfRange("base set must be nonempty");
  const auto card = domain_card(alphabet_type(sigma), q);
  if (!card) throw GuardExceeded(UINT64_MAX, guard);
  if (*card > guard) throw GuardExceeded(*card, guard);
  return SubstitutionBijection{sigma, q};
}

std::vector<int> church_table(const ChurchContext& cc, const Term& m,
                              const FreeMorphism& p, int q,
                              std::uint64_t guard) {
  SemValue den = interp_term(m, q);
  SemValue at_letters = den.apply(morphism_to_semantics(p, q));
  return table_of_sem(q, cc.vars, at_letters, guard);
}

}  // namespace proftree
