#include "proftree/profinite.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "proftree/errors.hpp"

namespace proftree {

namespace {

void check_member_index(const CloneRoster& r, int i, const char* role) {
  if (i < 0 || i >= r.size())
    throw IndexOutOfRange(std::string(role) + " member index " +
                          std::to_string(i) + " out of range");
}

// Letter assignments into each member, in the canonical order the family
// tables are stored against.
std::vector<std::vector<FreeMorphism>> member_enumerations(
    const RankedAlphabet& sigma, const CloneRoster& roster) {
  std::vector<std::vector<FreeMorphism>> out;
  out.reserve(roster.members.size());
  for (const RosterMember& m : roster.members)
    out.push_back(enumerate_morphisms(sigma, m.clone));
  return out;
}

int locate_morphism(const std::vector<FreeMorphism>& ms, const ClonePtr& clone,
                    const RankedAlphabet& sigma, const FreeMorphism& p) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    bool same = true;
    for (std::size_t j = 0; same && j < p.letters.size(); ++j)
      same = clone->equal(sigma.arities[j], ms[i].letters[j], p.letters[j]);
    if (same) return static_cast<int>(i);
  }
  return -1;
}

std::string render_assignment(const RankedAlphabet& sigma, const ClonePtr& c,
                              const FreeMorphism& p) {
  std::string out = "{";
  for (std::size_t j = 0; j < p.letters.size(); ++j) {
    if (j) out += ", ";
    out += "a" + std::to_string(j + 1) + " -> " +
           c->show(sigma.arities[j], p.letters[j]);
  }
  return out + "}";
}

}  // namespace

// --------------------------------------------------------------- roster ---

int CloneRoster::add_plain(std::string name, ClonePtr clone) {
  members.push_back({std::move(name), std::move(clone), RosterMember::Kind::Plain,
                     0, -1, {}});
  return size() - 1;
}

int CloneRoster::add_endo(int q, std::uint64_t guard) {
  members.push_back({"endo" + std::to_string(q), make_endo_clone(q, guard),
                     RosterMember::Kind::Endo, q, -1, {}});
  return size() - 1;
}

int CloneRoster::add_action(std::string name, const MonoidAction& action,
                            std::uint64_t guard) {
  members.push_back({std::move(name), make_action_clone(action, guard),
                     RosterMember::Kind::Plain, 0, -1, {}});
  return size() - 1;
}

int CloneRoster::add_image(std::string name, const FreeMorphism& p, int parent,
                           std::uint64_t guard) {
  check_member_index(*this, parent, "image parent");
  members.push_back({std::move(name), make_image_clone(p, guard),
                     RosterMember::Kind::Image, 0, parent, {}});
  return size() - 1;
}

int CloneRoster::add_product(int i, int j, std::uint64_t guard) {
  check_member_index(*this, i, "product factor");
  check_member_index(*this, j, "product factor");
  members.push_back({"(" + members[i].name + " x " + members[j].name + ")",
                     make_product_clone({members[i].clone, members[j].clone}, guard),
                     RosterMember::Kind::Product, 0, -1, {i, j}});
  return size() - 1;
}

int CloneRoster::add_endo_carrier(int parent, int m, std::uint64_t guard) {
  check_member_index(*this, parent, "carrier parent");
  members.push_back({"endo(" + members[parent].name + "_" + std::to_string(m) + ")",
                     make_endo_carrier_clone(members[parent].clone, m, guard),
                     RosterMember::Kind::EndoCarrier, m, parent, {}});
  return size() - 1;
}

int CloneRoster::add_delta_pair(int q, std::uint64_t guard) {
  members.push_back({"delta(endo" + std::to_string(q) + ")",
                     make_delta_clone(make_endo_clone(q, guard)),
                     RosterMember::Kind::DeltaEndo, q, -1, {}});
  const int delta_idx = size() - 1;
  members.push_back({"endo" + std::to_string(q) + "^" + std::to_string(q),
                     make_power_clone(make_endo_clone(q, guard), q, guard),
                     RosterMember::Kind::PowerEndo, q, delta_idx, {}});
  return delta_idx;
}

int CloneRoster::find(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (members[i].name == name) return i;
  return -1;
}

CloneRoster CloneRoster::standard(std::uint64_t guard) {
  CloneRoster r;
  r.add_endo(1, guard);
  const int e2 = r.add_endo(2, guard);
  r.add_endo(3, guard);
  r.add_action("act-z2", MonoidAction::z2_flip(), guard);
  FreeMorphism swap{RankedAlphabet{{1}}, r.members[e2].clone,
                    {CloneElem::table(2, 1, {1, 0})}};
  r.add_image("img-swap", swap, e2, guard);
  return r;
}

std::vector<RosterEdge> roster_edges(const CloneRoster& roster) {
  std::vector<RosterEdge> edges;
  for (int i = 0; i < roster.size(); ++i) {
    const RosterMember& m = roster.members[i];
    CloneMorphism ident;
    ident.source = m.clone;
    ident.target = m.clone;
    ident.name = "id";
    ident.component = [](int, const CloneElem& v) { return v; };
    edges.push_back({i, i, std::move(ident)});

    switch (m.kind) {
      case RosterMember::Kind::Product:
        for (std::size_t c = 0; c < m.factors.size(); ++c) {
          CloneMorphism pi;
          pi.source = m.clone;
          pi.target = roster.members[m.factors[c]].clone;
          pi.name = "pi" + std::to_string(c + 1);
          pi.component = [c](int, const CloneElem& v) { return v.as_tuple()[c]; };
          edges.push_back({i, m.factors[c], std::move(pi)});
        }
        break;
      case RosterMember::Kind::Image:
        edges.push_back({i, m.parent, image_inclusion(m.clone)});
        break;
      case RosterMember::Kind::EndoCarrier:
        edges.push_back({m.parent, i,
                         cay(roster.members[m.parent].clone, m.param)});
        break;
      case RosterMember::Kind::PowerEndo: {
        auto iso = delta_endo_iso(m.param);
        edges.push_back({m.parent, i, std::move(iso.first)});
        edges.push_back({i, m.parent, std::move(iso.second)});
        break;
      }
      default:
        break;
    }
  }
  return edges;
}

// ------------------------------------------------------ natural families ---

NaturalFamily family_of_tree(const RankedAlphabet& sigma, int n, const Tree& t,
                             std::shared_ptr<const CloneRoster> roster) {
  const std::size_t count = roster->members.size();
  return family_from_trees(sigma, n, std::vector<Tree>(count, t),
                           std::move(roster));
}

NaturalFamily family_from_trees(const RankedAlphabet& sigma, int n,
                                const std::vector<Tree>& per_member,
                                std::shared_ptr<const CloneRoster> roster) {
  if (per_member.size() != roster->members.size())
    throw ArityMismatch("expected one tree per roster member");
  for (const Tree& t : per_member) validate_tree(sigma, n, t);
  NaturalFamily u{sigma, n, std::move(roster), {}};
  u.tables.reserve(per_member.size());
  for (std::size_t i = 0; i < per_member.size(); ++i) {
    std::vector<CloneElem> table;
    for (const FreeMorphism& p :
         enumerate_morphisms(sigma, u.roster->members[i].clone))
      table.push_back(eval_morphism(p, per_member[i], n));
    u.tables.push_back(std::move(table));
  }
  return u;
}

bool families_equal(const NaturalFamily& a, const NaturalFamily& b) {
  if (a.sigma.arities != b.sigma.arities || a.n != b.n) return false;
  if (a.roster->members.size() != b.roster->members.size()) return false;
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    if (a.roster->members[i].name != b.roster->members[i].name) return false;
    if (a.tables[i].size() != b.tables[i].size()) return false;
    const ClonePtr& c = a.roster->members[i].clone;
    for (std::size_t k = 0; k < a.tables[i].size(); ++k)
      if (!c->equal(a.n, a.tables[i][k], b.tables[i][k])) return false;
  }
  return true;
}

NaturalityReport naturality_check(const NaturalFamily& u,
                                  std::size_t max_failures_per_edge) {
  NaturalityReport report;
  const CloneRoster& roster = *u.roster;
  const auto enums = member_enumerations(u.sigma, roster);
  for (const RosterEdge& e : roster_edges(roster)) {
    const ClonePtr& tgt = roster.members[e.target].clone;
    std::size_t edge_failures = 0;
    for (std::size_t k = 0; k < enums[e.source].size(); ++k) {
      const FreeMorphism& p = enums[e.source][k];
      CloneElem lhs = e.phi.component(u.n, u.tables[e.source][k]);
      FreeMorphism moved = compose(e.phi, p);
      int idx = locate_morphism(enums[e.target], tgt, u.sigma, moved);
      if (idx < 0)
        throw std::logic_error("composed assignment missing from enumeration");
      const CloneElem& rhs = u.tables[e.target][static_cast<std::size_t>(idx)];
      ++report.squares_checked;
      if (!tgt->equal(u.n, lhs, rhs)) {
        report.pass = false;
        if (edge_failures++ < max_failures_per_edge)
          report.failures.push_back(
              {e.phi.name + ": " + roster.members[e.source].name + " -> " +
                   roster.members[e.target].name,
               render_assignment(u.sigma, roster.members[e.source].clone, p),
               tgt->show(u.n, lhs) + " != " + tgt->show(u.n, rhs)});
      }
    }
  }
  return report;
}

std::optional<Tree> definability_search(const NaturalFamily& u, int size_bound) {
  const CloneRoster& roster = *u.roster;
  const auto enums = member_enumerations(u.sigma, roster);
  for (int size = 1; size <= size_bound; ++size) {
    for (const Tree& t : enumerate_trees(u.sigma, u.n, size)) {
      bool match = true;
      for (std::size_t i = 0; match && i < enums.size(); ++i) {
        const ClonePtr& c = roster.members[i].clone;
        for (std::size_t k = 0; match && k < enums[i].size(); ++k)
          match = c->equal(u.n, eval_morphism(enums[i][k], t, u.n),
                           u.tables[i][k]);
      }
      if (match) return t;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------- profinite approximants ---

ProfiniteTermApprox restrict_family(const NaturalFamily& u) {
  ProfiniteTermApprox theta;
  theta.sigma = u.sigma;
  theta.n = u.n;
  std::vector<std::pair<int, int>> endos;  // (q, member index)
  for (int i = 0; i < u.roster->size(); ++i)
    if (u.roster->members[i].kind == RosterMember::Kind::Endo)
      endos.emplace_back(u.roster->members[i].param, i);
  if (endos.empty())
    throw MissingRosterMember("roster has no endofunction member");
  std::sort(endos.begin(), endos.end());
  for (auto [q, i] : endos) {
    theta.base_sizes.push_back(q);
    // Capture the table by value; lookup happens per letter tuple.
    const RankedAlphabet sigma = u.sigma;
    const int n = u.n;
    std::vector<FreeMorphism> ms =
        enumerate_morphisms(sigma, u.roster->members[i].clone);
    std::vector<CloneElem> table = u.tables[i];
    theta.components.push_back(
        SemValue::fn([sigma, n, q, ms, table](const SemValue& letters) {
          FreeMorphism p = semantics_to_morphism(sigma, q, letters);
          for (std::size_t k = 0; k < ms.size(); ++k) {
            bool same = true;
            for (std::size_t j = 0; same && j < p.letters.size(); ++j)
              same = ms[k].letters[j].as_table() == p.letters[j].as_table();
            if (same) return sem_of_table(q, n, table[k].as_table());
          }
          throw IndexOutOfRange("letter tuple outside the enumeration");
        }));
  }
  return theta;
}

ProfiniteTermApprox approx_from_term(const RankedAlphabet& sigma, int n,
                                     const Term& m,
                                     std::vector<int> base_sizes) {
  Type ty = typecheck({}, m);
  Type want = church_type(sigma, n);
  if (!(ty == want))
    throw NotChurchTyped("term has type " + format_type(ty) + ", expected " +
                         format_type(want));
  ProfiniteTermApprox theta;
  theta.sigma = sigma;
  theta.n = n;
  theta.base_sizes = std::move(base_sizes);
  theta.rule = [m](int q) { return interp_term(m, q); };
  for (int q : theta.base_sizes) theta.components.push_back(theta.rule(q));
  return theta;
}

ProfiniteTermApprox approx_from_tree(const RankedAlphabet& sigma, int n,
                                     const Tree& t,
                                     std::vector<int> base_sizes) {
  return approx_from_term(sigma, n, encode(ChurchContext::make(sigma, n), t),
                          std::move(base_sizes));
}

NaturalFamily lift(const ProfiniteTermApprox& theta,
                   std::shared_ptr<const CloneRoster> roster,
                   std::uint64_t guard) {
  if (!theta.rule)
    throw UnsupportedOperation(
        "lifting needs an intensional rule, not just roster tables");
  NaturalFamily u{theta.sigma, theta.n, std::move(roster), {}};
  const int n = theta.n;
  for (const RosterMember& member : u.roster->members) {
    const ClonePtr& c = member.clone;
    const auto size = c->carrier_size(n);
    if (!size || *size > guard || *size > INT_MAX)
      throw GuardExceeded(size.value_or(UINT64_MAX), guard);
    const int s = static_cast<int>(*size);
    const std::vector<CloneElem> elems = c->enumerate(n);
    const SemValue at_carrier = theta.rule(s);
    const CloneMorphism through = cay(c, n);

    std::vector<CloneElem> table;
    for (const FreeMorphism& p : enumerate_morphisms(theta.sigma, c)) {
      const FreeMorphism moved = compose(through, p);
      std::vector<SemValue> comps;
      for (std::size_t j = 0; j < moved.letters.size(); ++j) {
        const int a = theta.sigma.arities[j];
        std::uint64_t rows = 1;
        for (int k = 0; k < a; ++k) {
          rows *= static_cast<std::uint64_t>(s);
          if (rows > guard) throw GuardExceeded(rows, guard);
        }
        std::vector<int> tbl;
        tbl.reserve(rows);
        std::vector<int> tuple(a, 0);
        for (std::uint64_t row = 0; row < rows; ++row) {
          std::uint64_t rest = row;
          for (int k = a - 1; k >= 0; --k) {
            tuple[k] = static_cast<int>(rest % s);
            rest /= s;
          }
          std::vector<CloneElem> args;
          args.reserve(a);
          for (int k = 0; k < a; ++k) args.push_back(elems[tuple[k]]);
          tbl.push_back(static_cast<int>(
              c->index_of(n, moved.letters[j].fn_apply(args))));
        }
        comps.push_back(sem_of_table(s, a, tbl));
      }
      SemValue result = at_carrier.apply(SemValue::tuple(std::move(comps)));
      std::vector<int> endo_tbl = table_of_sem(s, n, result, guard);
      CloneElem endo_elem = CloneElem::fn(
          n, [c, n, s, endo_tbl, elems](const std::vector<CloneElem>& args) {
            std::uint64_t row = 0;
            for (const CloneElem& a : args)
              row = row * static_cast<std::uint64_t>(s) + c->index_of(n, a);
            return elems[endo_tbl[row]];
          });
      table.push_back(appvar(c, n, endo_elem));
    }
    u.tables.push_back(std::move(table));
  }
  return u;
}

bool approx_equal(const ProfiniteTermApprox& a, const ProfiniteTermApprox& b,
                  std::uint64_t guard) {
  if (a.sigma.arities != b.sigma.arities || a.n != b.n) return false;
  if (a.base_sizes != b.base_sizes) return false;
  const Type ty = church_type(a.sigma, a.n);
  for (std::size_t i = 0; i < a.base_sizes.size(); ++i)
    if (!sem_equal(ty, a.base_sizes[i], a.components[i], b.components[i],
                   guard))
      return false;
  return true;
}

// ---------------------------------------------------- parametric families ---

ParametricFamily parametric_from_term(const Term& m,
                                      std::vector<int> base_sizes) {
  ParametricFamily rho;
  rho.type = typecheck({}, m);
  rho.base_sizes = std::move(base_sizes);
  rho.rule = [m](int q) { return interp_term(m, q); };
  return rho;
}

ParametricFamily parametric_from_tree(const RankedAlphabet& sigma, int n,
                                      const Tree& t,
                                      std::vector<int> base_sizes) {
  return parametric_from_term(encode(ChurchContext::make(sigma, n), t),
                              std::move(base_sizes));
}

std::vector<ParametricFamily> split_components(const ParametricFamily& rho) {
  const bool arrow = rho.type.is_arrow();
  const Type& target = arrow ? rho.type.cod() : rho.type;
  if (!target.is_product())
    throw UnsupportedOperation("family does not land in a product type");
  std::vector<ParametricFamily> out;
  for (std::size_t j = 0; j < target.components().size(); ++j) {
    ParametricFamily part;
    part.type = arrow ? Type::arrow(rho.type.dom(), target.components()[j])
                      : target.components()[j];
    part.base_sizes = rho.base_sizes;
    auto rule = rho.rule;
    if (arrow) {
      part.rule = [rule, j](int q) {
        SemValue whole = rule(q);
        return SemValue::fn([whole, j](const SemValue& x) {
          return whole.apply(x).components()[j];
        });
      };
    } else {
      part.rule = [rule, j](int q) { return rule(q).components()[j]; };
    }
    out.push_back(std::move(part));
  }
  return out;
}

ParametricityReport parametricity_check(const ParametricFamily& rho,
                                        std::size_t max_failures,
                                        std::uint64_t guard) {
  ParametricityReport report;
  std::vector<SemValue> at;
  at.reserve(rho.base_sizes.size());
  for (int q : rho.base_sizes) at.push_back(rho.rule(q));
  for (std::size_t a = 0; a < rho.base_sizes.size(); ++a)
    for (std::size_t b = 0; b < rho.base_sizes.size(); ++b)
      for (const FinRelation& r :
           enumerate_relations(rho.base_sizes[a], rho.base_sizes[b])) {
        ++report.relations_checked;
        if (!rel_member(rho.type, r, at[a], at[b], guard)) {
          report.pass = false;
          if (report.failures.size() < max_failures)
            report.failures.push_back(
                {rho.base_sizes[a], rho.base_sizes[b], r.describe()});
        }
      }
  return report;
}

FixedPointReport fixed_point_check(const ParametricFamily& rho,
                                   const RankedAlphabet& sigma, int q,
                                   std::uint64_t guard) {
  const Type want = church_type(sigma, 0);
  if (!(rho.type == want))
    throw UnsupportedOperation("family has type " + format_type(rho.type) +
                               ", expected " + format_type(want));
  const Type letters_ty = alphabet_type(sigma);

  const auto card = domain_card(want, q);
  if (!card || *card > guard || *card > INT_MAX)
    throw GuardExceeded(card.value_or(UINT64_MAX), guard);
  const int qstar = static_cast<int>(*card);
  const std::vector<SemValue> dom = enumerate_domain(want, q, guard);

  // The tuple of generator denotations is a letter tuple over the function
  // space: component i folds one node on top of already-denoted children.
  struct GenFn {
    SemValue gen;
    std::vector<SemValue> const* dom;
    Type want;
    int q;
    std::uint64_t guard;

    SemValue at(int depth, int arity, std::vector<SemValue> acc) const {
      if (depth == arity) {
        SemValue out = gen.apply(SemValue::tuple(std::move(acc)));
        return SemValue::base(static_cast<int>(
            domain_index(want, q, out, guard)));
      }
      GenFn self = *this;
      return SemValue::fn([self, depth, arity, acc](const SemValue& x) {
        std::vector<SemValue> next = acc;
        next.push_back((*self.dom)[static_cast<std::size_t>(x.base_elem())]);
        return self.at(depth + 1, arity, std::move(next));
      });
    }
  };

  std::vector<SemValue> star_comps;
  for (int i = 1; i <= sigma.letters(); ++i) {
    SemValue gen_val = interp_term(generator(sigma, i), q);
    GenFn builder{gen_val, &dom, want, q, guard};
    star_comps.push_back(builder.at(0, sigma.arity(i), {}));
  }

  const SemValue rerun = rho.rule(qstar).apply(SemValue::tuple(star_comps));
  const SemValue rhs = dom[static_cast<std::size_t>(rerun.base_elem())];
  const SemValue lhs = rho.rule(q);

  FixedPointReport report;
  report.q = q;
  report.expansion_size = static_cast<std::uint64_t>(qstar);
  for (const SemValue& v : enumerate_domain(letters_ty, q, guard)) {
    const int l = lhs.apply(v).base_elem();
    const int r = rhs.apply(v).base_elem();
    if (l != r) {
      report.pass = false;
      report.witness = describe_value(letters_ty, q, v, guard) + " -> " +
                       std::to_string(l) + " vs " + std::to_string(r);
      break;
    }
  }
  return report;
}

std::optional<Tree> parametric_to_tree(const ParametricFamily& rho,
                                       const RankedAlphabet& sigma, int n,
                                       int size_bound, std::uint64_t guard) {
  const Type want = church_type(sigma, n);
  if (!(rho.type == want))
    throw UnsupportedOperation("family has type " + format_type(rho.type) +
                               ", expected " + format_type(want));
  std::vector<SemValue> at;
  at.reserve(rho.base_sizes.size());
  for (int q : rho.base_sizes) at.push_back(rho.rule(q));
  const ChurchContext cc = ChurchContext::make(sigma, n);
  for (int size = 1; size <= size_bound; ++size)
    for (const Tree& t : enumerate_trees(sigma, n, size)) {
      const Term enc = encode(cc, t);
      bool ok = true;
      for (std::size_t i = 0; ok && i < rho.base_sizes.size(); ++i)
        ok = sem_equal(want, rho.base_sizes[i],
                       interp_term(enc, rho.base_sizes[i]), at[i], guard);
      if (ok) return t;
    }
  return std::nullopt;
}

}  // namespace proftree
