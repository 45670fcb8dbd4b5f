#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "proftree/clone.hpp"
#include "proftree/tree.hpp"

using namespace proftree;

namespace {

std::vector<std::string> formats(const std::vector<Tree>& ts) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(format_tree(t));
  return out;
}

CloneElem tbl2(int arity, std::vector<int> t) {
  return CloneElem::table(2, arity, std::move(t));
}

const RankedAlphabet kUnaryPair{{0, 1}};   // one constant, one unary letter
const RankedAlphabet kTwoUnary{{1, 1}};
const RankedAlphabet kBinary{{0, 2}};

}  // namespace

TEST_CASE("ranked alphabets parse and format") {
  CHECK(RankedAlphabet::parse("[0, 1]").arities == std::vector<int>{0, 1});
  CHECK(RankedAlphabet::parse("0 1").arities == std::vector<int>{0, 1});
  CHECK(RankedAlphabet::parse("[]").arities.empty());
  CHECK(RankedAlphabet::parse("[2]").format() == "[2]");
  CHECK(kUnaryPair.format() == "[0, 1]");
  CHECK(kUnaryPair.arity(2) == 1);
  CHECK_THROWS_AS(kUnaryPair.arity(3), IndexOutOfRange);
  CHECK_THROWS_AS(RankedAlphabet::parse("[0, x]"), ParseError);
}

TEST_CASE("tree enumeration follows the canonical order") {
  CHECK(formats(enumerate_trees(kUnaryPair, 1, 1)) ==
        std::vector<std::string>{"x1", "a1"});
  CHECK(formats(enumerate_trees(kUnaryPair, 1, 2)) ==
        std::vector<std::string>{"(a2 x1)", "(a2 a1)"});
  CHECK(formats(enumerate_trees(kUnaryPair, 2, 3)) ==
        std::vector<std::string>{"(a2 (a2 x1))", "(a2 (a2 x2))", "(a2 (a2 a1))"});

  auto upto = enumerate_trees_up_to(kUnaryPair, 3, 5);
  CHECK(upto.size() == 20);
  CHECK(format_tree(upto.front()) == "x1");
  CHECK(format_tree(upto.back()) == "(a2 (a2 (a2 (a2 a1))))");
  for (size_t i = 0; i + 1 < upto.size(); ++i) {
    CHECK(tree_less(upto[i], upto[i + 1]));
    CHECK_FALSE(tree_less(upto[i + 1], upto[i]));
  }

  // binary signature: no even-size trees, Catalan-style growth
  CHECK(enumerate_trees(kBinary, 2, 1).size() == 3);
  CHECK(enumerate_trees(kBinary, 2, 2).empty());
  CHECK(enumerate_trees(kBinary, 2, 3).size() == 9);
  CHECK(enumerate_trees(kBinary, 2, 5).size() == 54);
  CHECK(enumerate_trees_up_to(kBinary, 2, 8).size() == 471);
  CHECK(enumerate_trees_up_to(kBinary, 0, 9).size() == 23);

  CHECK(enumerate_trees_up_to(kTwoUnary, 1, 4).size() == 15);
  CHECK(formats(enumerate_trees(kTwoUnary, 1, 3)) ==
        std::vector<std::string>{"(a1 (a1 x1))", "(a1 (a2 x1))", "(a2 (a1 x1))",
                                 "(a2 (a2 x1))"});
}

TEST_CASE("tree measures, validation and parsing") {
  Tree t = parse_tree(kUnaryPair, 1, "(a2 (a2 x1))");
  CHECK(tree_size(t) == 3);
  CHECK(tree_height(t) == 2);
  CHECK(tree_max_var(t) == 1);
  CHECK(tree_size(Tree::variable(3)) == 1);
  CHECK(tree_height(Tree::variable(3)) == 0);
  CHECK(tree_height(parse_tree(kUnaryPair, 0, "a1")) == 1);
  CHECK(tree_max_var(parse_tree(kUnaryPair, 0, "(a2 a1)")) == 0);

  CHECK(format_tree(parse_tree(kBinary, 2, " ( a2 x1 ( a2 a1 x2 ) ) ")) ==
        "(a2 x1 (a2 a1 x2))");
  CHECK_THROWS_AS(parse_tree(kUnaryPair, 1, "(a1 x1)"), ParseError);   // arity 0 used unary
  CHECK_THROWS_AS(parse_tree(kUnaryPair, 1, "x2"), ParseError);        // variable out of range
  CHECK_THROWS_AS(parse_tree(kUnaryPair, 1, "(a2 x1) x1"), ParseError);
  CHECK_THROWS_AS(parse_tree(kUnaryPair, 1, "(a3 x1)"), ParseError);

  CHECK_NOTHROW(validate_tree(kBinary, 2, parse_tree(kBinary, 2, "(a2 x1 x2)")));
  CHECK_THROWS_AS(validate_tree(kUnaryPair, 0, Tree::variable(1)), IndexOutOfRange);
  CHECK_THROWS_AS(validate_tree(kBinary, 2, Tree::node(2, {Tree::variable(1)})),
                  ArityMismatch);
}

TEST_CASE("tree substitution grafts arguments") {
  Tree t = parse_tree(kUnaryPair, 2, "(a2 x2)");
  std::vector<Tree> args = {parse_tree(kUnaryPair, 1, "(a2 x1)"),
                            parse_tree(kUnaryPair, 1, "a1")};
  CHECK(format_tree(tree_subst(t, args)) == "(a2 a1)");

  Tree dup = parse_tree(kBinary, 1, "(a2 x1 x1)");
  std::vector<Tree> one = {parse_tree(kBinary, 2, "(a2 x1 x2)")};
  CHECK(format_tree(tree_subst(dup, one)) == "(a2 (a2 x1 x2) (a2 x1 x2))");

  CHECK_THROWS_AS(tree_subst(parse_tree(kUnaryPair, 2, "(a2 x2)"), one), ArityMismatch);
}

TEST_CASE("endomorphism clone: tables, variables, substitution") {
  auto endo2 = make_endo_clone(2);
  CHECK(endo2->describe() == "endo(2)");
  CHECK(endo2->variable(2, 1).as_table() == std::vector<int>{0, 0, 1, 1});
  CHECK(endo2->variable(2, 2).as_table() == std::vector<int>{0, 1, 0, 1});
  CHECK_THROWS_AS(endo2->variable(2, 3), IndexOutOfRange);

  auto all1 = endo2->enumerate(1);
  REQUIRE(all1.size() == 4);
  CHECK(all1[0].as_table() == std::vector<int>{0, 0});
  CHECK(all1[1].as_table() == std::vector<int>{0, 1});
  CHECK(all1[2].as_table() == std::vector<int>{1, 0});
  CHECK(all1[3].as_table() == std::vector<int>{1, 1});
  CHECK(endo2->index_of(1, tbl2(1, {1, 0})) == 2);

  CloneElem neg = tbl2(1, {1, 0});
  CloneElem conj = tbl2(2, {0, 0, 0, 1});
  CloneElem disj = tbl2(2, {0, 1, 1, 1});
  // conj(neg(x), x) is constantly 0
  CHECK(endo2->subst(2, 1, conj, {neg, endo2->variable(1, 1)}).as_table() ==
        std::vector<int>{0, 0});
  // conj(x1, x1) = x1
  CHECK(endo2->subst(2, 2, conj, {endo2->variable(2, 1), endo2->variable(2, 1)})
            .as_table() == std::vector<int>{0, 0, 1, 1});
  // neg(disj(x1, x2)) is the nor table
  CHECK(endo2->subst(1, 2, neg, {disj}).as_table() == std::vector<int>{1, 0, 0, 0});

  CHECK(endo2->carrier_size(2) == 16);
  CHECK(endo2->carrier_size(3) == 256);
  CHECK(endo2->enumerate(3).size() == 256);
  auto endo3 = make_endo_clone(3);
  CHECK(endo3->carrier_size(2) == 19683);
  CHECK_THROWS_AS(endo3->enumerate(3), GuardExceeded);
  // 0-element set: no constants, one empty table at every positive arity
  auto endo0 = make_endo_clone(0);
  CHECK(endo0->carrier_size(0) == 0);
  CHECK(endo0->carrier_size(2) == 1);
}

TEST_CASE("endomorphism clone satisfies the clone laws exhaustively") {
  auto res = check_clone_laws(make_endo_clone(2));
  CHECK(res.pass);
  CHECK(res.exhaustive);
  CHECK(res.checked > 1'000'000);  // the (2,2,2) associativity block alone is 16*256*256
  CHECK(res.failures.empty());
}

TEST_CASE("free clone laws hold on all trees up to the size hint") {
  LawCheckOptions opts;
  opts.free_tree_size = 3;
  auto res = check_clone_laws(make_free_clone(kUnaryPair), opts);
  CHECK(res.pass);
  CHECK(res.exhaustive);
  CHECK(res.checked > 50'000);
}

TEST_CASE("monoid action clone") {
  MonoidAction flip = MonoidAction::z2_flip();
  CHECK(flip.violations().empty());
  auto act = make_action_clone(flip);
  CHECK(act->carrier_size(2) == 6);

  auto elems = act->enumerate(1);
  REQUIRE(elems.size() == 4);
  CHECK(act->show(1, elems[0]) == "q0");
  CHECK(act->show(1, elems[1]) == "q1");
  CHECK(act->show(1, elems[2]) == "m0*x1");
  CHECK(act->show(1, elems[3]) == "m1*x1");

  CloneElem s1 = CloneElem::act_pair(1, 1);
  // flip after flip is the identity pair
  CloneElem r = act->subst(1, 1, s1, {s1});
  CHECK(act->equal(1, r, CloneElem::act_pair(0, 1)));
  // flip applied to the constant q0 lands in q1
  CHECK(act->equal(0, act->subst(1, 0, s1, {CloneElem::act_state(0)}),
                   CloneElem::act_state(1)));
  // constants absorb substitution
  CHECK(act->equal(0, act->subst(2, 0, CloneElem::act_state(1),
                                 {CloneElem::act_state(0), CloneElem::act_state(0)}),
                   CloneElem::act_state(1)));

  auto res = check_clone_laws(act);
  CHECK(res.pass);
  CHECK(res.exhaustive);

  // variables use the monoid unit
  CHECK(act->equal(2, act->variable(2, 2), CloneElem::act_pair(0, 2)));
}

TEST_CASE("broken actions are rejected and fail the clone laws") {
  MonoidAction bad = MonoidAction::z2_flip();
  bad.mul = {0, 1, 1, 1};  // lawful monoid, but now incompatible with the action
  auto violations = bad.violations();
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().first == "act-compose");
  CHECK_THROWS_AS(make_action_clone(bad), ActionLawViolation);

  auto res = check_clone_laws(make_action_clone_unchecked(bad));
  CHECK_FALSE(res.pass);
  REQUIRE_FALSE(res.failures.empty());
  CHECK(res.failures.front().law == "associativity");

  MonoidAction shapeless;
  shapeless.m_size = 0;
  CHECK_FALSE(shapeless.violations().empty());
}

TEST_CASE("product and power clones") {
  auto endo2 = make_endo_clone(2);
  auto pair = make_power_clone(endo2, 2);
  CHECK(pair->carrier_size(1) == 16);
  auto elems = pair->enumerate(1);
  REQUIRE(elems.size() == 16);
  // first component most significant: entry 1 varies the second component
  CHECK(elems[1].as_tuple()[0].as_table() == std::vector<int>{0, 0});
  CHECK(elems[1].as_tuple()[1].as_table() == std::vector<int>{0, 1});
  CHECK(pair->show(1, elems[1]) == "([0,0], [0,1])");

  LawCheckOptions opts;
  opts.exhaustive_cap = 100'000;
  auto res = check_clone_laws(pair, opts);
  CHECK(res.pass);

  auto mixed = make_product_clone({endo2, make_action_clone(MonoidAction::z2_flip())});
  auto mres = check_clone_laws(mixed, opts);
  CHECK(mres.pass);
  CHECK(mixed->carrier_size(1) == 16);  // 4 tables * (2 states + 2 pairs)
}

namespace {

// Deliberately broken structures for exercising the law checker.

// swaps the first two arguments of every substitution of arity >= 2
class SwappedSubst final : public Clone {
public:
  explicit SwappedSubst(ClonePtr base) : Clone(base->guard()), base_(std::move(base)) {}
  std::string describe() const override { return "swapped(" + base_->describe() + ")"; }
  CloneElem variable(int n, int i) const override { return base_->variable(n, i); }
  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    std::vector<CloneElem> a = args;
    if (a.size() >= 2) std::swap(a[0], a[1]);
    return base_->subst(m, n, head, a);
  }
  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    return base_->equal(n, a, b);
  }
  std::optional<std::uint64_t> carrier_size(int n) const override {
    return base_->carrier_size(n);
  }
  std::vector<CloneElem> enumerate(int n) const override { return base_->enumerate(n); }

private:
  ClonePtr base_;
};

// pads substitutions with the first variable instead of the fresh last one
class BrokenShift final : public Clone {
public:
  explicit BrokenShift(ClonePtr base) : Clone(base->guard()), base_(std::move(base)) {}
  std::string describe() const override { return "broken-shift(" + base_->describe() + ")"; }
  CloneElem variable(int n, int i) const override { return base_->variable(n + 1, i); }
  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    std::vector<CloneElem> extended = args;
    extended.push_back(base_->variable(n + 1, 1));
    return base_->subst(m + 1, n + 1, head, extended);
  }
  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    return base_->equal(n + 1, a, b);
  }
  std::optional<std::uint64_t> carrier_size(int n) const override {
    return base_->carrier_size(n + 1);
  }
  std::vector<CloneElem> enumerate(int n) const override {
    return base_->enumerate(n + 1);
  }

private:
  ClonePtr base_;
};

// routes each head component to the opposite side of a pair
class CrossedPair final : public Clone {
public:
  explicit CrossedPair(ClonePtr comp)
      : Clone(comp->guard()), prod_(make_power_clone(comp, 2)), comp_(std::move(comp)) {}
  std::string describe() const override { return "crossed(" + comp_->describe() + ")"; }
  CloneElem variable(int n, int i) const override { return prod_->variable(n, i); }
  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    CloneElem crossed = CloneElem::tuple({head.as_tuple()[1], head.as_tuple()[0]});
    return prod_->subst(m, n, crossed, args);
  }
  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    return prod_->equal(n, a, b);
  }
  std::optional<std::uint64_t> carrier_size(int n) const override {
    return prod_->carrier_size(n);
  }
  std::vector<CloneElem> enumerate(int n) const override { return prod_->enumerate(n); }

private:
  ClonePtr prod_, comp_;
};

}  // namespace

TEST_CASE("the law checker rejects corrupted structures") {
  auto endo2 = make_endo_clone(2);
  LawCheckOptions opts;
  opts.exhaustive_cap = 50'000;
  opts.samples = 500;

  auto swapped = check_clone_laws(std::make_shared<SwappedSubst>(endo2), opts);
  CHECK_FALSE(swapped.pass);
  bool swapped_projection = false;
  for (const auto& f : swapped.failures)
    if (f.law == "projection") swapped_projection = true;
  CHECK(swapped_projection);

  auto shifted = check_clone_laws(std::make_shared<BrokenShift>(endo2), opts);
  CHECK_FALSE(shifted.pass);
  bool shifted_unit = false;
  for (const auto& f : shifted.failures)
    if (f.law == "unit") shifted_unit = true;
  CHECK(shifted_unit);

  auto crossed = check_clone_laws(std::make_shared<CrossedPair>(endo2), opts);
  CHECK_FALSE(crossed.pass);
  bool crossed_unit = false;
  for (const auto& f : crossed.failures)
    if (f.law == "unit") crossed_unit = true;
  CHECK(crossed_unit);
}

TEST_CASE("arity shift: variables, substitution, laws") {
  auto endo2 = make_endo_clone(2);
  auto delta = make_delta_clone(endo2);
  CHECK(delta->carrier_size(1) == 16);  // the binary tables of the base
  CHECK(delta->variable(1, 1).as_table() == std::vector<int>{0, 0, 1, 1});
  CHECK_THROWS_AS(delta->variable(1, 2), IndexOutOfRange);

  CloneElem xorish = tbl2(2, {0, 1, 1, 0});
  // substituting the lone variable by itself fixes the hidden last input
  CHECK(delta->equal(1, delta->subst(1, 1, xorish, {delta->variable(1, 1)}), xorish));
  CloneElem negfirst = tbl2(2, {1, 1, 0, 0});
  CHECK(delta->subst(1, 1, xorish, {negfirst}).as_table() ==
        std::vector<int>{1, 0, 0, 1});

  LawCheckOptions opts;
  opts.exhaustive_cap = 100'000;
  auto res = check_clone_laws(delta, opts);
  CHECK(res.pass);
  CHECK_FALSE(res.exhaustive);  // carriers of 256 force sampling at the top block
  CHECK(res.checked > 10'000);
}

TEST_CASE("splitting on the last input: arity shift vs power") {
  const int q = 2;
  auto [fwd, bwd] = delta_endo_iso(q);
  CloneElem xorish = tbl2(2, {0, 1, 1, 0});
  CloneElem split = fwd.component(1, xorish);
  CHECK(split.as_tuple()[0].as_table() == std::vector<int>{0, 1});
  CHECK(split.as_tuple()[1].as_table() == std::vector<int>{1, 0});

  for (int n = 0; n <= 1; ++n) {
    auto all = fwd.source->enumerate(n);
    for (const auto& f : all)
      CHECK(fwd.source->equal(n, bwd.component(n, fwd.component(n, f)), f));
    auto tuples = bwd.source->enumerate(n);
    for (const auto& v : tuples)
      CHECK(bwd.source->equal(n, fwd.component(n, bwd.component(n, v)), v));
  }

  auto fres = check_clone_morphism(fwd);
  CHECK(fres.pass);
  auto bres = check_clone_morphism(bwd);
  CHECK(bres.pass);
}

TEST_CASE("substitution as endomorphisms of a carrier, and back") {
  auto endo2 = make_endo_clone(2);
  for (int n = 1; n <= 2; ++n) {
    CloneMorphism to_endo = cay(endo2, n);
    for (const auto& x : endo2->enumerate(n)) {
      CloneElem image = to_endo.component(n, x);
      CHECK(endo2->equal(n, appvar(endo2, n, image), x));
    }
  }

  // injectivity seen through the intensional equality of the target
  CloneMorphism c1 = cay(endo2, 1);
  auto all = endo2->enumerate(1);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = 0; j < all.size(); ++j)
      CHECK(c1.target->equal(1, c1.component(1, all[i]), c1.component(1, all[j])) ==
            (i == j));

  LawCheckOptions small;
  small.max_arity = 1;
  auto res = check_clone_laws(c1.target, small);
  CHECK(res.pass);
  auto mres = check_clone_morphism(c1, small);
  CHECK(mres.pass);

  // the same works over a non-endo base, here the action clone
  auto act = make_action_clone(MonoidAction::z2_flip());
  CloneMorphism ca = cay(act, 1);
  for (const auto& x : act->enumerate(1))
    CHECK(act->equal(1, appvar(act, 1, ca.component(1, x)), x));
}

TEST_CASE("image clones are substitution closures") {
  auto endo2 = make_endo_clone(2);
  CloneElem neg = tbl2(1, {1, 0});
  CloneElem const0 = tbl2(1, {0, 0});

  FreeMorphism p;
  p.sigma = kTwoUnary;
  p.target = endo2;
  p.letters = {neg, const0};
  auto img = make_image_clone(p);

  auto c1 = img->enumerate(1);
  REQUIRE(c1.size() == 4);
  CHECK(c1[0].as_table() == std::vector<int>{0, 1});
  CHECK(c1[1].as_table() == std::vector<int>{1, 0});
  CHECK(c1[2].as_table() == std::vector<int>{0, 0});
  CHECK(c1[3].as_table() == std::vector<int>{1, 1});
  CHECK(img->carrier_size(2) == 6);
  CHECK(img->carrier_size(0) == 0);

  auto res = check_clone_laws(img);
  CHECK(res.pass);
  CHECK(res.exhaustive);

  CloneMorphism inc = image_inclusion(img);
  CHECK(check_clone_morphism(inc).pass);
  FreeMorphism surj = image_surjection(img);
  Tree t = parse_tree(kTwoUnary, 1, "(a1 (a2 x1))");
  CHECK(endo2->equal(1, surj.eval(t, 1), p.eval(t, 1)));
  CHECK(p.eval(t, 1).as_table() == std::vector<int>{1, 1});

  // factorization: inclusion after surjection recovers the original map
  FreeMorphism roundtrip = compose(inc, surj);
  for (const auto& u : enumerate_trees_up_to(kTwoUnary, 1, 4))
    CHECK(endo2->equal(1, roundtrip.eval(u, 1), p.eval(u, 1)));

  // a single involution generates a two-element closure
  FreeMorphism inv;
  inv.sigma = RankedAlphabet{{1}};
  inv.target = endo2;
  inv.letters = {neg};
  CHECK(make_image_clone(inv)->carrier_size(1) == 2);
}

TEST_CASE("morphisms out of a free clone are letter assignments") {
  auto endo2 = make_endo_clone(2);
  auto all = enumerate_morphisms(kTwoUnary, endo2);
  REQUIRE(all.size() == 16);
  CHECK(count_morphisms(kTwoUnary, endo2) == 16);
  CHECK(all[6].letters[0].as_table() == std::vector<int>{0, 1});
  CHECK(all[6].letters[1].as_table() == std::vector<int>{1, 0});

  Tree t = parse_tree(kTwoUnary, 1, "(a1 (a2 x1))");
  CHECK(eval_morphism(all[6], t, 1).as_table() == std::vector<int>{1, 0});
  CHECK(eval_morphism(all[9], t, 1).as_table() == std::vector<int>{1, 0});
  CHECK(eval_morphism(all[11], t, 1).as_table() == std::vector<int>{0, 0});

  CHECK(enumerate_morphisms(RankedAlphabet{{0}}, endo2).size() == 2);
  CHECK(enumerate_morphisms(RankedAlphabet{}, endo2).size() == 1);
  CHECK_FALSE(count_morphisms(kTwoUnary, make_free_clone(kTwoUnary)).has_value());
  CHECK_THROWS_AS(enumerate_morphisms(kTwoUnary, make_free_clone(kTwoUnary)),
                  GuardExceeded);

  // each letter assignment really is a morphism
  LawCheckOptions opts;
  opts.max_arity = 2;
  opts.free_tree_size = 3;
  auto mres = check_clone_morphism(all[6].as_morphism(), opts);
  CHECK(mres.pass);

  // evaluation respects substitution on a spot-checked graft
  Tree head = parse_tree(kTwoUnary, 1, "(a1 x1)");
  Tree arg = parse_tree(kTwoUnary, 1, "(a2 x1)");
  CloneElem lhs = eval_morphism(all[6], tree_subst(head, {arg}), 1);
  CloneElem rhs = endo2->subst(1, 1, eval_morphism(all[6], head, 1),
                               {eval_morphism(all[6], arg, 1)});
  CHECK(endo2->equal(1, lhs, rhs));
}

TEST_CASE("carrier elements correspond to single-letter morphisms") {
  auto endo2 = make_endo_clone(2);
  CloneElem imp = tbl2(2, {1, 1, 0, 1});
  FreeMorphism m = element_as_morphism(endo2, 2, imp);
  CHECK(m.sigma.format() == "[2]");

  Tree straight = parse_tree(m.sigma, 2, "(a1 x1 x2)");
  CHECK(endo2->equal(2, m.eval(straight, 2), imp));
  Tree flipped = parse_tree(m.sigma, 2, "(a1 x2 x1)");
  CHECK(m.eval(flipped, 2).as_table() == std::vector<int>{1, 0, 1, 1});

  // distinct elements stay distinct as morphisms on the generator tree
  for (const auto& a : endo2->enumerate(2))
    for (const auto& b : endo2->enumerate(2)) {
      bool same_elem = endo2->equal(2, a, b);
      bool same_eval = endo2->equal(2, element_as_morphism(endo2, 2, a).eval(straight, 2),
                                    element_as_morphism(endo2, 2, b).eval(straight, 2));
      CHECK(same_elem == same_eval);
    }
}

TEST_CASE("the morphism checker rejects a non-homomorphic component") {
  auto endo2 = make_endo_clone(2);
  CloneMorphism bogus;
  bogus.source = endo2;
  bogus.target = endo2;
  bogus.name = "transpose-binary";
  bogus.component = [&](int n, const CloneElem& v) {
    if (n != 2) return v;
    const auto& t = v.as_table();
    return CloneElem::table(2, 2, {t[0], t[2], t[1], t[3]});
  };
  auto res = check_clone_morphism(bogus);
  CHECK_FALSE(res.pass);
  bool saw_vars = false;
  for (const auto& f : res.failures)
    if (f.law == "morphism-variables") saw_vars = true;
  CHECK(saw_vars);

  CloneMorphism ident;
  ident.source = endo2;
  ident.target = endo2;
  ident.component = [](int, const CloneElem& v) { return v; };
  CHECK(check_clone_morphism(ident).pass);
}
