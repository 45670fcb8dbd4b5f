#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "proftree/sig.hpp"
#include "proftree/tree.hpp"

using namespace proftree;

namespace {

std::vector<std::string> formats(const std::vector<Tree>& ts) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(format_tree(t));
  return out;
}

std::vector<std::string> sorted_formats(std::vector<Tree> ts) {
  std::sort(ts.begin(), ts.end(), tree_less);
  return formats(ts);
}

// Every list of arities drawn from {0, 1, 2} with up to `max_letters`
// entries, in odometer order.
std::vector<std::vector<int>> small_alphabets(int max_letters) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (int l = 0; l < max_letters; ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& base : frontier)
      for (int a = 0; a <= 2; ++a) {
        auto t = base;
        t.push_back(a);
        out.push_back(t);
        next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return out;
}

MonoidAction z3_rotation() {
  MonoidAction ma;
  ma.m_size = 3;
  ma.q_size = 3;
  ma.unit = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ma.mul.push_back((a + b) % 3);
  for (int a = 0; a < 3; ++a)
    for (int x = 0; x < 3; ++x) ma.act.push_back((x + a) % 3);
  return ma;
}

// Two elements {id, z} with z absorbing; z collapses every state to 0.
MonoidAction absorbing_action() {
  MonoidAction ma;
  ma.m_size = 2;
  ma.q_size = 2;
  ma.unit = 0;
  ma.mul = {0, 1, 1, 1};
  ma.act = {0, 1, 0, 0};
  return ma;
}

}  // namespace

TEST_CASE("signature sizes, labels, and the renaming action") {
  const Signature y2 = Signature::representable(2);
  CHECK(y2.size_at(0) == 0);
  CHECK(y2.size_at(3) == 9);
  CHECK(y2.describe() == "y2");

  const Signature s = setsig({2, 1});  // y0 + y0 + y1
  CHECK(s.arities() == std::vector<int>{0, 0, 1});
  CHECK(s.describe() == "y0 + y0 + y1");
  CHECK(s.size_at(0) == 2);
  CHECK(s.size_at(3) == 5);
  CHECK(Signature::none().describe() == "0");
  CHECK(Signature::none().size_at(7) == 0);

  // encode/decode round-trip with the first pick coordinate most significant
  for (int n = 0; n <= 3; ++n)
    for (std::uint64_t e = 0; e < s.size_at(n); ++e) {
      auto [summand, pick] = s.decode(n, e);
      CHECK(s.encode(n, summand, pick) == e);
    }
  CHECK(y2.encode(3, 0, {1, 2}) == 5);
  CHECK(y2.describe_element(3, 5) == "g0(1,2)");
  CHECK(s.describe_element(0, 1) == "g1");

  // renaming acts on the pick coordinates only
  const std::vector<int> f{2, 0, 1};  // [3] -> [3]
  CHECK(y2.act(3, 3, f, y2.encode(3, 0, {0, 1})) == y2.encode(3, 0, {2, 0}));
  CHECK(s.act(0, 3, {}, 1) == 1);  // constants are untouched

  CHECK_THROWS_AS(s.encode(2, 2, {5}), IndexOutOfRange);
  CHECK_THROWS_AS(s.encode(2, 2, {0, 1}), ArityMismatch);
  CHECK_THROWS_AS(s.encode(2, 9, {}), IndexOutOfRange);
  CHECK_THROWS_AS(s.decode(1, 99), IndexOutOfRange);
  CHECK_THROWS_AS(y2.act(2, 2, {0}, 0), ArityMismatch);
  CHECK_THROWS_AS(y2.act(2, 2, {0, 7}, 0), IndexOutOfRange);
  CHECK_THROWS_AS(Signature::representables({-1}), IndexOutOfRange);
}

TEST_CASE("tabulated signatures replay the action on a bounded grid") {
  const Signature rep = setsig({2, 1});
  const Signature tab = Signature::tabulate(rep, 3);
  CHECK_FALSE(tab.representable_form());
  CHECK(tab.grid_bound() == 3);
  CHECK(tab.describe() == "tabulated(bound 3; sizes 2 3 4 5)");
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (const auto& f : all_functions(m, n))
        for (std::uint64_t e = 0; e < rep.size_at(m); ++e)
          CHECK(tab.act(m, n, f, e) == rep.act(m, n, f, e));
  CHECK_THROWS_AS(tab.size_at(4), IndexOutOfRange);
  CHECK_THROWS_AS(tab.act(3, 4, {0, 0, 0}, 0), IndexOutOfRange);
  CHECK_THROWS_AS(tab.arities(), UnsupportedOperation);
  CHECK_THROWS_AS(tab.decode(1, 0), UnsupportedOperation);
  CHECK_THROWS_AS(rep.grid_bound(), UnsupportedOperation);

  CHECK(functoriality_ok(rep, 3));
  CHECK(functoriality_ok(tab, 3));

  // corrupt one entry of the identity action at arity 1: functoriality breaks
  auto sizes = std::vector<std::uint64_t>{2, 3};
  std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> tables(2);
  const Signature small = Signature::tabulate(rep, 1);
  for (int m = 0; m <= 1; ++m) {
    tables[m].resize(2);
    for (int n = 0; n <= 1; ++n)
      for (const auto& f : all_functions(m, n)) {
        std::vector<std::uint64_t> img;
        for (std::uint64_t e = 0; e < sizes[m]; ++e)
          img.push_back(small.act(m, n, f, e));
        tables[m][n].push_back(std::move(img));
      }
  }
  tables[1][1][0] = {1, 0, 2};  // no longer the identity on X_1
  const Signature bad = Signature::tabulated(sizes, tables);
  CHECK_FALSE(functoriality_ok(bad, 1));

  CHECK_THROWS_AS(Signature::tabulated({}, {}), ArityMismatch);
  tables[1][1].pop_back();
  CHECK_THROWS_AS(Signature::tabulated(sizes, tables), ArityMismatch);
}

TEST_CASE("composition collapses to a coproduct with provenance") {
  const Signature y2 = Signature::representable(2);
  const Signature x01 = Signature::representables({0, 1});

  const Composite c = compose_with_provenance(y2, x01);
  CHECK(c.sig.arities() == std::vector<int>{0, 1, 1, 2});
  REQUIRE(c.provenance.size() == 4);
  CHECK(c.provenance[0].left == 0);
  CHECK(c.provenance[0].right == std::vector<int>{0, 0});
  CHECK(c.provenance[1].right == std::vector<int>{0, 1});
  CHECK(c.provenance[2].right == std::vector<int>{1, 0});
  CHECK(c.provenance[3].right == std::vector<int>{1, 1});

  // the two structural collapses
  CHECK(compose_signatures(Signature::unit(), x01).arities() ==
        x01.arities());
  CHECK(compose_signatures(Signature::constant(), x01).arities() ==
        std::vector<int>{0});
  CHECK(compose_signatures(x01, Signature::none()).arities() ==
        std::vector<int>{0});
  CHECK(compose_signatures(Signature::none(), x01).arities().empty());

  // size dual route: the composite evaluated at n equals sum of |X'_n|^a
  const std::vector<std::pair<Signature, Signature>> pairs = {
      {y2, x01},
      {Signature::representables({0, 1, 2}), Signature::representables({0, 1, 1})},
      {Signature::representables({1, 1}), y2},
      {x01, Signature::none()},
  };
  for (const auto& [a, b] : pairs) {
    const Signature comp = compose_signatures(a, b);
    for (int n = 0; n <= 4; ++n) {
      std::uint64_t direct = 0;
      for (int ar : a.arities()) {
        std::uint64_t p = 1;
        for (int k = 0; k < ar; ++k) p *= b.size_at(n);
        direct += p;
      }
      CHECK(comp.size_at(n) == direct);
    }
  }

  const Signature tab = Signature::tabulate(x01, 2);
  CHECK_THROWS_AS(compose_signatures(tab, x01), UnsupportedOperation);
  CHECK_THROWS_AS(compose_signatures(x01, tab), UnsupportedOperation);
  // 5 summands to the 10th power overflows the composite-summand guard
  CHECK_THROWS_AS(
      compose_signatures(Signature::representable(10),
                         Signature::representables({0, 0, 1, 1, 2})),
      GuardExceeded);
}

TEST_CASE("unit and absorption laws are explicit natural bijections") {
  for (const auto& arities : small_alphabets(3)) {
    const Signature x = Signature::representables(arities);
    const GridMap ul = unit_left_iso(x, 3);
    const GridMap ur = unit_right_iso(x, 3);
    CHECK(grid_map_bijective(compose_signatures(Signature::unit(), x), x, ul));
    CHECK(grid_map_natural(compose_signatures(Signature::unit(), x), x, ul));
    CHECK(grid_map_bijective(compose_signatures(x, Signature::unit()), x, ur));
    CHECK(grid_map_natural(compose_signatures(x, Signature::unit()), x, ur));

    const Signature y0x = compose_signatures(Signature::constant(), x);
    const GridMap ab = absorb_left_iso(x, 3);
    CHECK(grid_map_bijective(y0x, Signature::constant(), ab));
    CHECK(grid_map_natural(y0x, Signature::constant(), ab));
  }

  // a grid map with the wrong shape is a usage error, not a failed check
  const Signature y1 = Signature::unit();
  GridMap broken{1, {{0}}};
  CHECK_THROWS_AS(grid_map_bijective(y1, y1, broken), ArityMismatch);
}

TEST_CASE("semidirect pairs: units, associativity sizes, labels") {
  const PointedPair p{2, 2}, r{2, 2}, s{2, 2};
  CHECK(semidirect(p, r) == PointedPair{6, 4});
  CHECK(semidirect(p, PointedPair{0, 1}) == p);
  CHECK(semidirect(PointedPair{0, 1}, r) == r);
  CHECK(semidirect(semidirect(p, r), s) == semidirect(p, semidirect(r, s)));
  for (int pq = 0; pq <= 2; ++pq)
    for (int pa = 0; pa <= 2; ++pa)
      for (int rq = 0; rq <= 2; ++rq)
        for (int ra = 0; ra <= 2; ++ra) {
          const PointedPair u{pq, pa}, v{rq, ra}, w{2, 2};
          CHECK(semidirect(semidirect(u, v), w) ==
                semidirect(u, semidirect(v, w)));
        }

  const PointedPair pp{2, 2}, rr{3, 1};
  CHECK(semidirect_state_label(pp, rr, 1) == "q1");
  CHECK(semidirect_state_label(pp, rr, 2) == "(a0, q0)");
  CHECK(semidirect_state_label(pp, rr, 7) == "(a1, q2)");
  CHECK(semidirect_letter_label(pp, rr, 1) == "(a1, b0)");
  CHECK_THROWS_AS(semidirect_state_label(pp, rr, 8), IndexOutOfRange);
  CHECK_THROWS_AS(semidirect_letter_label(pp, rr, 2), IndexOutOfRange);
}

TEST_CASE("setsig, sigset, and the adjunction counts") {
  CHECK(setsig({0, 1}).arities() == Signature::unit().arities());
  CHECK(setsig({2, 1}).arities() == std::vector<int>{0, 0, 1});

  const Signature y0 = Signature::constant();
  const Signature y1 = Signature::unit();
  CHECK(sigset(y1) == PointedPair{0, 1});
  CHECK(sigset_adjoint(y1) == PointedPair{0, 1});
  CHECK(sigset(y0) == PointedPair{1, 2});
  CHECK(sigset_adjoint(y0) == PointedPair{1, 1});
  CHECK(sigset(Signature::tabulate(setsig({2, 1}), 1)) == PointedPair{2, 5});

  struct Row {
    PointedPair p;
    Signature x;
    std::uint64_t sig, adjoint, construction;
  };
  const std::vector<Row> rows = {
      {{1, 1}, y0, 1, 1, 2},
      {{1, 1}, y1, 0, 0, 0},
      {{2, 1}, Signature::representables({0, 1}), 2, 2, 3},
      {{1, 2}, Signature::representables({0, 1}), 4, 4, 9},
      {{0, 1}, Signature::representables({1, 1}), 2, 2, 2},
      {{2, 0}, Signature::representables({0, 0}), 4, 4, 4},
      {{1, 1}, Signature::representables({0, 1}), 2, 2, 3},
  };
  for (const auto& row : rows) {
    const AdjunctionCount c = adjunction_count(row.p, row.x);
    CHECK(c.sig_side == row.sig);
    CHECK(c.adjoint_side == row.adjoint);
    CHECK(c.construction_side == row.construction);
    // dual route: filtering every candidate family on the grid agrees with
    // the generator-image product
    CHECK(natural_transformation_count(setsig(row.p), row.x, 2) == row.sig);
    CHECK(c.sig_side == c.adjoint_side);
  }

  // the counting identity needs (X_0, X_1): the constructed pair
  // over-counts whenever X_0 and the letter carrier are both nonempty
  CHECK(adjunction_count({1, 1}, y0).construction_side !=
        adjunction_count({1, 1}, y0).sig_side);

  CHECK_THROWS_AS(
      natural_transformation_count(setsig({2, 2}), setsig({2, 2}), 3, 1000),
      GuardExceeded);
}

TEST_CASE("the coherence map lands in the twisted product") {
  const std::vector<std::pair<PointedPair, PointedPair>> cases = {
      {{2, 2}, {2, 2}}, {{1, 1}, {1, 1}}, {{0, 1}, {2, 2}},
      {{2, 2}, {0, 1}}, {{3, 1}, {1, 2}}, {{1, 2}, {1, 1}},
  };
  for (const auto& [p, r] : cases) {
    const Signature comp = compose_signatures(setsig(p), setsig(r));
    const Signature tgt = setsig(semidirect(p, r));
    const GridMap mu = setsig_coherence(p, r, 3);
    CHECK(grid_map_bijective(comp, tgt, mu));
    CHECK(grid_map_natural(comp, tgt, mu));
    auto lhs = comp.arities();
    auto rhs = tgt.arities();
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    CHECK(lhs == rhs);
  }

  // frozen sizes for the flagship case
  const Signature flag =
      compose_signatures(setsig({2, 2}), setsig({2, 2}));
  CHECK(flag.size_at(0) == 6);
  CHECK(flag.size_at(1) == 10);
  CHECK(flag.size_at(2) == 14);
  CHECK(flag.size_at(3) == 18);

  // the map is a genuine summand permutation: letters of p over states of r
  // land in the state block, interleaved summands get reordered
  const GridMap mu = setsig_coherence({1, 2}, {1, 1}, 1);
  CHECK(mu.images[0] == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(mu.images[1] == std::vector<std::uint64_t>{0, 1, 3, 2, 4});
}

TEST_CASE("free iteration stages are exactly the height-bounded trees") {
  const RankedAlphabet pair{{0, 1}};
  const RankedAlphabet two_unary{{1, 1}};
  const RankedAlphabet binary{{0, 2}};

  CHECK(free_iteration(pair, 0, 1).empty());
  CHECK(formats(free_iteration(pair, 1, 1)) == std::vector<std::string>{"x1"});
  CHECK(formats(free_iteration(pair, 2, 1)) ==
        std::vector<std::string>{"x1", "a1", "(a2 x1)"});
  CHECK(formats(free_iteration(pair, 3, 1)) ==
        std::vector<std::string>{"x1", "a1", "(a2 x1)", "(a2 a1)",
                                 "(a2 (a2 x1))"});

  const std::vector<std::size_t> pair_sizes{0, 1, 3, 5, 7, 9, 11};
  const std::vector<std::size_t> pair_sizes_n0{0, 0, 1, 2, 3, 4, 5};
  const std::vector<std::size_t> pair_sizes_n2{0, 2, 5, 8, 11, 14, 17};
  for (int d = 0; d <= 6; ++d) {
    CHECK(free_iteration(pair, d, 1).size() == pair_sizes[d]);
    CHECK(free_iteration(pair, d, 0).size() == pair_sizes_n0[d]);
    CHECK(free_iteration(pair, d, 2).size() == pair_sizes_n2[d]);
  }
  CHECK(free_iteration(two_unary, 6, 1).size() == 63);
  CHECK(free_iteration(binary, 4, 1).size() == 123);
  CHECK(free_iteration(binary, 5, 1).size() == 15131);

  // every element is a valid tree of height below the stage index, and each
  // stage embeds into the next
  for (int d = 1; d <= 6; ++d) {
    const auto cur = free_iteration(pair, d, 2);
    for (const auto& t : cur) {
      validate_tree(pair, 2, t);
      CHECK(tree_height(t) < d);
    }
    auto prev = sorted_formats(free_iteration(pair, d - 1, 2));
    auto here = sorted_formats(cur);
    CHECK(std::includes(here.begin(), here.end(), prev.begin(), prev.end()));
  }

  // agreement with the tree enumerator: the depth-6 stage is the set of
  // trees of height < 6 (chains have size <= 6, so that bound is exhaustive)
  for (const auto& sigma : {pair, two_unary}) {
    auto stage = sorted_formats(free_iteration(sigma, 6, 1));
    std::vector<Tree> expect;
    for (const auto& t : enumerate_trees_up_to(sigma, 1, 6))
      if (tree_height(t) < 6) expect.push_back(t);
    CHECK(stage == sorted_formats(expect));
  }
  // the binary alphabet reaches size-15 trees by stage 4
  {
    auto stage = sorted_formats(free_iteration(binary, 4, 1));
    std::vector<Tree> expect;
    for (const auto& t : enumerate_trees_up_to(binary, 1, 15))
      if (tree_height(t) < 4) expect.push_back(t);
    CHECK(stage == sorted_formats(expect));
  }

  CHECK_THROWS_AS(free_iteration(binary, 6, 1), GuardExceeded);
  CHECK_THROWS_AS(free_iteration(pair, -1, 1), IndexOutOfRange);
}

TEST_CASE("monoid objects from actions, diagram laws, and extraction") {
  const MonoidAction flip = MonoidAction::z2_flip();
  const MonoidObject mo = action_to_monoid_object(flip);
  CHECK(mo.carrier == PointedPair{2, 2});
  CHECK(mo.unit.second == std::vector<int>{0});
  CHECK(mo.mult.first == std::vector<int>{0, 1, 0, 1, 1, 0});
  CHECK(mo.mult.second == std::vector<int>{0, 1, 1, 0});
  CHECK(monoid_object_laws(mo).pass());

  for (const MonoidAction& ma :
       {flip, MonoidAction::trivial(0), MonoidAction::trivial(1),
        MonoidAction::trivial(3), z3_rotation(), absorbing_action()}) {
    const ActionRoundtrip rt = action_roundtrip(ma);
    CHECK(rt.pass);
    CHECK(rt.laws.pass());
    CHECK(rt.states_fixed);
    CHECK(rt.tables_match);
    CHECK(rt.clone_laws.pass);
  }

  // unitors and associator are explicit bijections on the labels
  const PointedPair c{2, 3};
  const SetPairMap alpha = associator(c, c, c);
  std::set<int> seen_first(alpha.first.begin(), alpha.first.end());
  CHECK(static_cast<int>(seen_first.size()) == alpha.cod.q);
  CHECK(alpha.dom.q == alpha.cod.q);
  CHECK(left_unitor(c).first == identity_map(c).first);
  CHECK(right_unitor(c).second == identity_map(c).second);

  CHECK_THROWS_AS(compose(left_unitor(c), left_unitor(PointedPair{1, 1})),
                  ArityMismatch);
}

TEST_CASE("broken actions fail the diagrams and are named by the checker") {
  // unit fails to act as the identity
  MonoidAction bad_unit = MonoidAction::z2_flip();
  bad_unit.act = {1, 0, 1, 0};
  CHECK_THROWS_WITH_AS(action_roundtrip(bad_unit),
                       doctest::Contains("act-unit"), ActionLawViolation);
  const MonoidObjectLaws lu = monoid_object_laws(action_to_monoid_object(bad_unit));
  CHECK_FALSE(lu.left_unit);
  CHECK(lu.right_unit);  // the monoid itself is still lawful
  CHECK_FALSE(lu.failures.empty());

  // multiplication incompatible with the action
  MonoidAction bad_compose = MonoidAction::z2_flip();
  bad_compose.mul = {0, 1, 1, 1};
  CHECK_THROWS_WITH_AS(action_roundtrip(bad_compose),
                       doctest::Contains("act-compose"), ActionLawViolation);
  const MonoidObjectLaws ac =
      monoid_object_laws(action_to_monoid_object(bad_compose));
  CHECK_FALSE(ac.assoc);
  CHECK(ac.left_unit);

  // broken monoid unit shows up in the unit diagrams
  MonoidAction bad_mul = MonoidAction::z2_flip();
  bad_mul.mul = {1, 1, 1, 0};
  CHECK_THROWS_AS(action_roundtrip(bad_mul), ActionLawViolation);
  const MonoidObjectLaws bm =
      monoid_object_laws(action_to_monoid_object(bad_mul));
  CHECK_FALSE((bm.left_unit && bm.right_unit));

  // malformed tables are rejected before any diagram is built
  MonoidAction garbage = MonoidAction::z2_flip();
  garbage.act.pop_back();
  CHECK_THROWS_AS(action_roundtrip(garbage), ActionLawViolation);
  CHECK_THROWS_AS(action_to_monoid_object(garbage), ArityMismatch);
}
