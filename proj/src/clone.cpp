#include "proftree/clone.hpp"

#include <algorithm>
#include <map>
#include <limits>
#include <random>
#include <sstream>

namespace proftree {
namespace {

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    auto m = checked_mul(r, base);
    if (!m) return std::nullopt;
    r = *m;
  }
  return r;
}

[[noreturn]] void wrong_kind(const char* want) {
  throw UnsupportedOperation(std::string("clone element is not a ") + want);
}

}  // namespace

// -------------------------------------------------------------- CloneElem ---

struct CloneElem::Cell {
  Kind kind;
  std::optional<Tree> tree;
  int base = 0;   // table base q
  int arity = 0;  // table / fn arity
  std::vector<int> tbl;
  bool is_state = false;
  int act_val = 0;
  int act_var = 0;
  std::vector<CloneElem> comps;
  CloneElemFn fn;
};

CloneElem CloneElem::tree(Tree t) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Tree;
  c->tree = std::move(t);
  return CloneElem(std::move(c));
}

CloneElem CloneElem::table(int q, int arity, std::vector<int> tbl) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Table;
  c->base = q;
  c->arity = arity;
  c->tbl = std::move(tbl);
  return CloneElem(std::move(c));
}

CloneElem CloneElem::act_state(int q) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Act;
  c->is_state = true;
  c->act_val = q;
  return CloneElem(std::move(c));
}

CloneElem CloneElem::act_pair(int m, int var) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Act;
  c->is_state = false;
  c->act_val = m;
  c->act_var = var;
  return CloneElem(std::move(c));
}

CloneElem CloneElem::tuple(std::vector<CloneElem> comps) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Tuple;
  c->comps = std::move(comps);
  return CloneElem(std::move(c));
}

CloneElem CloneElem::fn(int arity, CloneElemFn f) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Fn;
  c->arity = arity;
  c->fn = std::move(f);
  return CloneElem(std::move(c));
}

CloneElem::Kind CloneElem::kind() const { return cell_->kind; }

const Tree& CloneElem::as_tree() const {
  if (cell_->kind != Kind::Tree) wrong_kind("tree");
  return *cell_->tree;
}

int CloneElem::table_base() const {
  if (cell_->kind != Kind::Table) wrong_kind("table");
  return cell_->base;
}

int CloneElem::table_arity() const {
  if (cell_->kind != Kind::Table) wrong_kind("table");
  return cell_->arity;
}

const std::vector<int>& CloneElem::as_table() const {
  if (cell_->kind != Kind::Table) wrong_kind("table");
  return cell_->tbl;
}

bool CloneElem::act_is_state() const {
  if (cell_->kind != Kind::Act) wrong_kind("monoid-action element");
  return cell_->is_state;
}

int CloneElem::act_value() const {
  if (cell_->kind != Kind::Act) wrong_kind("monoid-action element");
  return cell_->act_val;
}

int CloneElem::act_var() const {
  if (cell_->kind != Kind::Act || cell_->is_state) wrong_kind("monoid-action pair");
  return cell_->act_var;
}

const std::vector<CloneElem>& CloneElem::as_tuple() const {
  if (cell_->kind != Kind::Tuple) wrong_kind("tuple");
  return cell_->comps;
}

int CloneElem::fn_arity() const {
  if (cell_->kind != Kind::Fn) wrong_kind("function");
  return cell_->arity;
}

CloneElem CloneElem::fn_apply(const std::vector<CloneElem>& args) const {
  if (cell_->kind != Kind::Fn) wrong_kind("function");
  if (static_cast<int>(args.size()) != cell_->arity)
    throw ArityMismatch("applying " + std::to_string(cell_->arity) +
                        "-ary function element to " + std::to_string(args.size()) +
                        " arguments");
  return cell_->fn(args);
}

namespace {

std::string generic_show(const CloneElem& v) {
  switch (v.kind()) {
    case CloneElem::Kind::Tree:
      return format_tree(v.as_tree());
    case CloneElem::Kind::Table: {
      std::ostringstream os;
      os << '[';
      const auto& t = v.as_table();
      for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ']';
      return os.str();
    }
    case CloneElem::Kind::Act:
      if (v.act_is_state()) return "q" + std::to_string(v.act_value());
      return "m" + std::to_string(v.act_value()) + "*x" + std::to_string(v.act_var());
    case CloneElem::Kind::Tuple: {
      std::string s = "(";
      const auto& cs = v.as_tuple();
      for (size_t i = 0; i < cs.size(); ++i) {
        if (i) s += ", ";
        s += generic_show(cs[i]);
      }
      return s + ")";
    }
    case CloneElem::Kind::Fn:
      return "<fn/" + std::to_string(v.fn_arity()) + ">";
  }
  return "?";
}

void check_var_index(int n, int i) {
  if (i < 1 || i > n)
    throw IndexOutOfRange("variable x" + std::to_string(i) + " out of range for arity " +
                          std::to_string(n));
}

void check_args(int m, size_t got) {
  if (static_cast<size_t>(m) != got)
    throw ArityMismatch("substitution into a " + std::to_string(m) +
                        "-ary element needs " + std::to_string(m) + " arguments, got " +
                        std::to_string(got));
}

}  // namespace

std::string Clone::show(int, const CloneElem& v) const { return generic_show(v); }

std::vector<CloneElem> Clone::law_samples(int n, int) const { return enumerate(n); }

std::uint64_t Clone::index_of(int n, const CloneElem& v) const {
  auto all = enumerate(n);
  for (size_t i = 0; i < all.size(); ++i)
    if (equal(n, all[i], v)) return i;
  throw IndexOutOfRange("element not found in carrier of arity " + std::to_string(n));
}

// ------------------------------------------------------------- free clone ---

namespace {

class FreeClone final : public Clone {
public:
  FreeClone(RankedAlphabet sigma, std::uint64_t guard)
      : Clone(guard), sigma_(std::move(sigma)) {}

  std::string describe() const override { return "free" + sigma_.format(); }

  CloneElem variable(int n, int i) const override {
    check_var_index(n, i);
    return CloneElem::tree(Tree::variable(i));
  }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    std::vector<Tree> ts;
    ts.reserve(args.size());
    for (const auto& a : args) {
      validate_tree(sigma_, n, a.as_tree());
      ts.push_back(a.as_tree());
    }
    validate_tree(sigma_, m, head.as_tree());
    return CloneElem::tree(tree_subst(head.as_tree(), ts));
  }

  bool equal(int, const CloneElem& a, const CloneElem& b) const override {
    return a.as_tree() == b.as_tree();
  }

  std::optional<std::uint64_t> carrier_size(int) const override { return std::nullopt; }

  std::vector<CloneElem> enumerate(int) const override {
    throw GuardExceeded(std::numeric_limits<std::uint64_t>::max(), guard());
  }

  std::vector<CloneElem> law_samples(int n, int size_hint) const override {
    std::vector<CloneElem> out;
    for (auto& t : enumerate_trees_up_to(sigma_, n, size_hint))
      out.push_back(CloneElem::tree(std::move(t)));
    return out;
  }

  const RankedAlphabet& sigma() const { return sigma_; }

private:
  RankedAlphabet sigma_;
};

// ------------------------------------------------------------- endo clone ---

class EndoClone final : public Clone {
public:
  EndoClone(int q, std::uint64_t guard) : Clone(guard), q_(q) {
    if (q < 0) throw ConfigError("endomorphism clone needs a set size >= 0");
  }

  std::string describe() const override { return "endo(" + std::to_string(q_) + ")"; }

  // Domain tuples are indexed with the first argument most significant.
  std::uint64_t dom_size(int n) const {
    auto p = checked_pow(static_cast<std::uint64_t>(q_), static_cast<std::uint64_t>(n));
    if (!p || *p > guard())
      throw GuardExceeded(p ? *p : std::numeric_limits<std::uint64_t>::max(), guard());
    return *p;
  }

  CloneElem variable(int n, int i) const override {
    check_var_index(n, i);
    std::uint64_t total = dom_size(n);
    std::uint64_t step = 1;
    for (int k = 0; k < n - i; ++k) step *= static_cast<std::uint64_t>(q_);
    std::vector<int> tbl(total);
    for (std::uint64_t t = 0; t < total; ++t)
      tbl[t] = static_cast<int>((t / step) % static_cast<std::uint64_t>(q_));
    return CloneElem::table(q_, n, std::move(tbl));
  }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    if (head.table_arity() != m)
      throw ArityMismatch("head has arity " + std::to_string(head.table_arity()) +
                          ", expected " + std::to_string(m));
    std::uint64_t total = dom_size(n);
    const auto& h = head.as_table();
    std::vector<int> tbl(total);
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t idx = 0;
      for (int k = 0; k < m; ++k)
        idx = idx * static_cast<std::uint64_t>(q_) +
              static_cast<std::uint64_t>(args[static_cast<size_t>(k)].as_table()[t]);
      tbl[t] = h[idx];
    }
    return CloneElem::table(q_, n, std::move(tbl));
  }

  bool equal(int, const CloneElem& a, const CloneElem& b) const override {
    return a.table_base() == b.table_base() && a.table_arity() == b.table_arity() &&
           a.as_table() == b.as_table();
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    auto dom = checked_pow(static_cast<std::uint64_t>(q_), static_cast<std::uint64_t>(n));
    if (!dom) return std::nullopt;
    return checked_pow(static_cast<std::uint64_t>(q_), *dom);
  }

  std::vector<CloneElem> enumerate(int n) const override {
    auto count = carrier_size(n);
    if (!count || *count > guard())
      throw GuardExceeded(count ? *count : std::numeric_limits<std::uint64_t>::max(),
                          guard());
    std::uint64_t dom = dom_size(n);
    std::vector<CloneElem> out;
    out.reserve(static_cast<size_t>(*count));
    std::vector<int> tbl(dom, 0);
    for (std::uint64_t idx = 0; idx < *count; ++idx) {
      out.push_back(CloneElem::table(q_, n, tbl));
      // advance the table like an odometer, entry 0 most significant
      for (std::uint64_t t = dom; t-- > 0;) {
        if (++tbl[t] < q_) break;
        tbl[t] = 0;
      }
    }
    return out;
  }

  int q() const { return q_; }

private:
  int q_;
};

// ----------------------------------------------------------- action clone ---

class ActionClone final : public Clone {
public:
  ActionClone(MonoidAction a, std::uint64_t guard) : Clone(guard), a_(std::move(a)) {}

  std::string describe() const override {
    return "action(M=" + std::to_string(a_.m_size) + ",Q=" + std::to_string(a_.q_size) + ")";
  }

  CloneElem variable(int n, int i) const override {
    check_var_index(n, i);
    return CloneElem::act_pair(a_.unit, i);
  }

  CloneElem subst(int m, int, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    if (head.act_is_state()) return head;  // constants absorb substitution
    int a = head.act_value();
    int i = head.act_var();
    if (i < 1 || i > m)
      throw IndexOutOfRange("pair refers to x" + std::to_string(i) +
                            " beyond arity " + std::to_string(m));
    const CloneElem& u = args[static_cast<size_t>(i) - 1];
    if (u.act_is_state()) return CloneElem::act_state(a_.apply(a, u.act_value()));
    return CloneElem::act_pair(a_.times(a, u.act_value()), u.act_var());
  }

  bool equal(int, const CloneElem& x, const CloneElem& y) const override {
    if (x.act_is_state() != y.act_is_state()) return false;
    if (x.act_is_state()) return x.act_value() == y.act_value();
    return x.act_value() == y.act_value() && x.act_var() == y.act_var();
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    return static_cast<std::uint64_t>(a_.q_size) +
           static_cast<std::uint64_t>(a_.m_size) * static_cast<std::uint64_t>(n);
  }

  std::vector<CloneElem> enumerate(int n) const override {
    std::vector<CloneElem> out;
    for (int q = 0; q < a_.q_size; ++q) out.push_back(CloneElem::act_state(q));
    for (int m = 0; m < a_.m_size; ++m)
      for (int i = 1; i <= n; ++i) out.push_back(CloneElem::act_pair(m, i));
    return out;
  }

private:
  MonoidAction a_;
};

// ---------------------------------------------------------- product clone ---

class ProductClone final : public Clone {
public:
  ProductClone(std::vector<ClonePtr> comps, std::uint64_t guard)
      : Clone(guard), comps_(std::move(comps)) {}

  std::string describe() const override {
    std::string s = "product(";
    for (size_t k = 0; k < comps_.size(); ++k) {
      if (k) s += " x ";
      s += comps_[k]->describe();
    }
    return s + ")";
  }

  CloneElem variable(int n, int i) const override {
    std::vector<CloneElem> cs;
    cs.reserve(comps_.size());
    for (const auto& c : comps_) cs.push_back(c->variable(n, i));
    return CloneElem::tuple(std::move(cs));
  }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    const auto& hs = head.as_tuple();
    if (hs.size() != comps_.size())
      throw ArityMismatch("tuple width " + std::to_string(hs.size()) +
                          " does not match product width " + std::to_string(comps_.size()));
    std::vector<CloneElem> cs;
    cs.reserve(comps_.size());
    for (size_t k = 0; k < comps_.size(); ++k) {
      std::vector<CloneElem> ak;
      ak.reserve(args.size());
      for (const auto& a : args) ak.push_back(a.as_tuple()[k]);
      cs.push_back(comps_[k]->subst(m, n, hs[k], ak));
    }
    return CloneElem::tuple(std::move(cs));
  }

  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    for (size_t k = 0; k < comps_.size(); ++k)
      if (!comps_[k]->equal(n, a.as_tuple()[k], b.as_tuple()[k])) return false;
    return true;
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    std::uint64_t total = 1;
    for (const auto& c : comps_) {
      auto s = c->carrier_size(n);
      if (!s) return std::nullopt;
      auto m = checked_mul(total, *s);
      if (!m) return std::nullopt;
      total = *m;
    }
    return total;
  }

  std::vector<CloneElem> enumerate(int n) const override {
    auto count = carrier_size(n);
    if (!count || *count > guard())
      throw GuardExceeded(count ? *count : std::numeric_limits<std::uint64_t>::max(),
                          guard());
    std::vector<std::vector<CloneElem>> per;
    per.reserve(comps_.size());
    for (const auto& c : comps_) per.push_back(c->enumerate(n));
    std::vector<CloneElem> out;
    out.reserve(static_cast<size_t>(*count));
    std::vector<size_t> idx(comps_.size(), 0);
    for (std::uint64_t step = 0; step < *count; ++step) {
      std::vector<CloneElem> cs;
      cs.reserve(comps_.size());
      for (size_t k = 0; k < comps_.size(); ++k) cs.push_back(per[k][idx[k]]);
      out.push_back(CloneElem::tuple(std::move(cs)));
      for (size_t k = comps_.size(); k-- > 0;) {  // first component most significant
        if (++idx[k] < per[k].size()) break;
        idx[k] = 0;
      }
    }
    return out;
  }

  std::string show(int n, const CloneElem& v) const override {
    std::string s = "(";
    const auto& cs = v.as_tuple();
    for (size_t k = 0; k < cs.size() && k < comps_.size(); ++k) {
      if (k) s += ", ";
      s += comps_[k]->show(n, cs[k]);
    }
    return s + ")";
  }

private:
  std::vector<ClonePtr> comps_;
};

// ------------------------------------------------------------ delta clone ---

class DeltaClone final : public Clone {
public:
  explicit DeltaClone(ClonePtr base) : Clone(base->guard()), base_(std::move(base)) {}

  std::string describe() const override { return "delta(" + base_->describe() + ")"; }

  CloneElem variable(int n, int i) const override {
    check_var_index(n, i);  // only the first n of the n+1 base variables exist here
    return base_->variable(n + 1, i);
  }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    std::vector<CloneElem> extended = args;
    extended.push_back(base_->variable(n + 1, n + 1));
    return base_->subst(m + 1, n + 1, head, extended);
  }

  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    return base_->equal(n + 1, a, b);
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    return base_->carrier_size(n + 1);
  }

  std::vector<CloneElem> enumerate(int n) const override { return base_->enumerate(n + 1); }

  std::vector<CloneElem> law_samples(int n, int hint) const override {
    return base_->law_samples(n + 1, hint);
  }

  std::string show(int n, const CloneElem& v) const override {
    return base_->show(n + 1, v);
  }

private:
  ClonePtr base_;
};

// ----------------------------------------------- endomorphisms of a carrier ---

class EndoCarrierClone final : public Clone {
public:
  EndoCarrierClone(ClonePtr base, int m, std::uint64_t guard)
      : Clone(guard), base_(std::move(base)), m_(m) {}

  std::string describe() const override {
    return "endo(" + base_->describe() + "_" + std::to_string(m_) + ")";
  }

  CloneElem variable(int n, int i) const override {
    check_var_index(n, i);
    return CloneElem::fn(n, [i](const std::vector<CloneElem>& args) {
      return args[static_cast<size_t>(i) - 1];
    });
  }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    check_args(m, args.size());
    if (head.fn_arity() != m)
      throw ArityMismatch("head has arity " + std::to_string(head.fn_arity()) +
                          ", expected " + std::to_string(m));
    return CloneElem::fn(n, [head, args](const std::vector<CloneElem>& xs) {
      std::vector<CloneElem> ys;
      ys.reserve(args.size());
      for (const auto& g : args) ys.push_back(g.fn_apply(xs));
      return head.fn_apply(ys);
    });
  }

  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    const auto& elems = base_elems();
    auto tuples = checked_pow(elems.size(), static_cast<std::uint64_t>(n));
    if (!tuples || *tuples > guard())
      throw GuardExceeded(tuples ? *tuples : std::numeric_limits<std::uint64_t>::max(),
                          guard());
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    for (std::uint64_t step = 0; step < *tuples; ++step) {
      std::vector<CloneElem> xs;
      xs.reserve(idx.size());
      for (size_t k : idx) xs.push_back(elems[k]);
      if (!base_->equal(m_, a.fn_apply(xs), b.fn_apply(xs))) return false;
      for (size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < elems.size()) break;
        idx[k] = 0;
      }
    }
    return true;
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    auto s = base_->carrier_size(m_);
    if (!s) return std::nullopt;
    auto dom = checked_pow(*s, static_cast<std::uint64_t>(n));
    if (!dom) return std::nullopt;
    return checked_pow(*s, *dom);
  }

  std::vector<CloneElem> enumerate(int n) const override {
    auto count = carrier_size(n);
    if (!count || *count > guard())
      throw GuardExceeded(count ? *count : std::numeric_limits<std::uint64_t>::max(),
                          guard());
    auto elems = std::make_shared<std::vector<CloneElem>>(base_elems());
    std::uint64_t s = elems->size();
    std::uint64_t dom = *checked_pow(s, static_cast<std::uint64_t>(n));
    std::vector<CloneElem> out;
    out.reserve(static_cast<size_t>(*count));
    for (std::uint64_t f = 0; f < *count; ++f) {
      // decode the function index into a results table, entry 0 most significant
      auto table = std::make_shared<std::vector<CloneElem>>();
      table->reserve(static_cast<size_t>(dom));
      std::uint64_t rest = f;
      std::vector<size_t> digits(static_cast<size_t>(dom));
      for (std::uint64_t t = dom; t-- > 0;) {
        digits[static_cast<size_t>(t)] = static_cast<size_t>(rest % s);
        rest /= s;
      }
      for (std::uint64_t t = 0; t < dom; ++t)
        table->push_back((*elems)[digits[static_cast<size_t>(t)]]);
      ClonePtr base = base_;
      int m = m_;
      out.push_back(CloneElem::fn(n, [base, m, elems, table, s](
                                          const std::vector<CloneElem>& xs) {
        std::uint64_t t = 0;
        for (const auto& x : xs) {
          std::uint64_t pos = 0;
          while (pos < elems->size() && !base->equal(m, (*elems)[pos], x)) ++pos;
          if (pos == elems->size())
            throw IndexOutOfRange("argument is not a carrier element");
          t = t * s + pos;
        }
        return (*table)[static_cast<size_t>(t)];
      }));
    }
    return out;
  }

  const ClonePtr& base() const { return base_; }
  int base_arity() const { return m_; }

private:
  const std::vector<CloneElem>& base_elems() const {
    if (!cache_) cache_ = base_->enumerate(m_);
    return *cache_;
  }

  ClonePtr base_;
  int m_;
  mutable std::optional<std::vector<CloneElem>> cache_;
};

// ------------------------------------------------------------- image clone ---

class ImageClone final : public Clone {
public:
  ImageClone(FreeMorphism p, std::uint64_t guard) : Clone(guard), p_(std::move(p)) {
    if (static_cast<int>(p_.letters.size()) != p_.sigma.letters())
      throw ArityMismatch("letter assignment has " + std::to_string(p_.letters.size()) +
                          " entries for an alphabet of " +
                          std::to_string(p_.sigma.letters()));
  }

  std::string describe() const override {
    return "image(free" + p_.sigma.format() + " -> " + p_.target->describe() + ")";
  }

  CloneElem variable(int n, int i) const override { return p_.target->variable(n, i); }

  CloneElem subst(int m, int n, const CloneElem& head,
                  const std::vector<CloneElem>& args) const override {
    return p_.target->subst(m, n, head, args);
  }

  bool equal(int n, const CloneElem& a, const CloneElem& b) const override {
    return p_.target->equal(n, a, b);
  }

  std::optional<std::uint64_t> carrier_size(int n) const override {
    return closure(n).size();
  }

  std::vector<CloneElem> enumerate(int n) const override { return closure(n); }

  std::string show(int n, const CloneElem& v) const override {
    return p_.target->show(n, v);
  }

  const FreeMorphism& presentation() const { return p_; }

private:
  // Substitution closure of the letter images and variables, grown in
  // breadth-first rounds so the resulting order is deterministic.
  const std::vector<CloneElem>& closure(int n) const {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    std::vector<CloneElem> elems;
    for (int i = 1; i <= n; ++i) elems.push_back(p_.target->variable(n, i));
    bool grew = true;
    while (grew) {
      grew = false;
      size_t frontier = elems.size();
      for (int j = 1; j <= p_.sigma.letters(); ++j) {
        int k = p_.sigma.arity(j);
        auto tuples = checked_pow(frontier, static_cast<std::uint64_t>(k));
        if (!tuples || *tuples > guard())
          throw GuardExceeded(tuples ? *tuples : std::numeric_limits<std::uint64_t>::max(),
                              guard());
        std::vector<size_t> idx(static_cast<size_t>(k), 0);
        for (std::uint64_t step = 0; step < *tuples; ++step) {
          std::vector<CloneElem> args;
          args.reserve(idx.size());
          for (size_t x : idx) args.push_back(elems[x]);
          CloneElem cand =
              p_.target->subst(k, n, p_.letters[static_cast<size_t>(j) - 1], args);
          bool known = false;
          for (const auto& e : elems)
            if (p_.target->equal(n, e, cand)) {
              known = true;
              break;
            }
          if (!known) {
            elems.push_back(std::move(cand));
            grew = true;
            if (elems.size() > guard()) throw GuardExceeded(elems.size(), guard());
          }
          for (size_t z = idx.size(); z-- > 0;) {
            if (++idx[z] < frontier) break;
            idx[z] = 0;
          }
        }
      }
    }
    return cache_.emplace(n, std::move(elems)).first->second;
  }

  FreeMorphism p_;
  mutable std::map<int, std::vector<CloneElem>> cache_;
};

}  // namespace

// ------------------------------------------------------------ constructors ---

ClonePtr make_free_clone(RankedAlphabet sigma, std::uint64_t guard) {
  return std::make_shared<FreeClone>(std::move(sigma), guard);
}

ClonePtr make_endo_clone(int q, std::uint64_t guard) {
  return std::make_shared<EndoClone>(q, guard);
}

ClonePtr make_endo_carrier_clone(ClonePtr base, int m, std::uint64_t guard) {
  return std::make_shared<EndoCarrierClone>(std::move(base), m, guard);
}

ClonePtr make_product_clone(std::vector<ClonePtr> comps, std::uint64_t guard) {
  return std::make_shared<ProductClone>(std::move(comps), guard);
}

ClonePtr make_power_clone(ClonePtr base, int copies, std::uint64_t guard) {
  std::vector<ClonePtr> comps(static_cast<size_t>(copies), base);
  return std::make_shared<ProductClone>(std::move(comps), guard);
}

ClonePtr make_delta_clone(ClonePtr base) {
  return std::make_shared<DeltaClone>(std::move(base));
}

// ---------------------------------------------------------- monoid actions ---

std::vector<std::pair<std::string, std::string>> MonoidAction::violations() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto bad_shape = [&](const std::string& w) { out.emplace_back("shape", w); };
  if (m_size < 1) bad_shape("monoid must have at least the unit element");
  if (q_size < 0) bad_shape("state set size must be >= 0");
  if (unit < 0 || unit >= m_size) bad_shape("unit index out of range");
  if (mul.size() != static_cast<size_t>(m_size) * static_cast<size_t>(m_size))
    bad_shape("multiplication table has wrong size");
  if (act.size() != static_cast<size_t>(m_size) * static_cast<size_t>(q_size))
    bad_shape("action table has wrong size");
  if (!out.empty()) return out;
  for (int v : mul)
    if (v < 0 || v >= m_size) {
      bad_shape("multiplication table entry out of range");
      return out;
    }
  for (int v : act)
    if (v < 0 || v >= q_size) {
      bad_shape("action table entry out of range");
      return out;
    }

  auto m_name = [](int a) { return "m" + std::to_string(a); };
  auto q_name = [](int x) { return "q" + std::to_string(x); };
  for (int a = 0; a < m_size; ++a) {
    if (times(unit, a) != a)
      out.emplace_back("unit-left", "e*" + m_name(a) + " = " + m_name(times(unit, a)));
    if (times(a, unit) != a)
      out.emplace_back("unit-right", m_name(a) + "*e = " + m_name(times(a, unit)));
  }
  for (int a = 0; a < m_size; ++a)
    for (int b = 0; b < m_size; ++b)
      for (int c = 0; c < m_size; ++c)
        if (times(times(a, b), c) != times(a, times(b, c)))
          out.emplace_back("mul-assoc", "(" + m_name(a) + "*" + m_name(b) + ")*" +
                                            m_name(c) + " != " + m_name(a) + "*(" +
                                            m_name(b) + "*" + m_name(c) + ")");
  for (int x = 0; x < q_size; ++x)
    if (apply(unit, x) != x)
      out.emplace_back("act-unit", "e." + q_name(x) + " = " + q_name(apply(unit, x)));
  for (int a = 0; a < m_size; ++a)
    for (int b = 0; b < m_size; ++b)
      for (int x = 0; x < q_size; ++x)
        if (apply(times(a, b), x) != apply(a, apply(b, x)))
          out.emplace_back("act-compose", "(" + m_name(a) + "*" + m_name(b) + ")." +
                                              q_name(x) + " != " + m_name(a) + ".(" +
                                              m_name(b) + "." + q_name(x) + ")");
  return out;
}

MonoidAction MonoidAction::z2_flip() {
  MonoidAction a;
  a.m_size = 2;
  a.q_size = 2;
  a.unit = 0;
  a.mul = {0, 1, 1, 0};
  a.act = {0, 1, 1, 0};
  return a;
}

MonoidAction MonoidAction::trivial(int q) {
  MonoidAction a;
  a.m_size = 1;
  a.q_size = q;
  a.unit = 0;
  a.mul = {0};
  a.act.resize(static_cast<size_t>(q));
  for (int x = 0; x < q; ++x) a.act[static_cast<size_t>(x)] = x;
  return a;
}

ClonePtr make_action_clone(const MonoidAction& action, std::uint64_t guard) {
  auto bad = action.violations();
  if (!bad.empty()) throw ActionLawViolation(bad.front().first, bad.front().second);
  return std::make_shared<ActionClone>(action, guard);
}

ClonePtr make_action_clone_unchecked(const MonoidAction& action, std::uint64_t guard) {
  return std::make_shared<ActionClone>(action, guard);
}

// -------------------------------------------------------------- morphisms ---

CloneElem FreeMorphism::eval(const Tree& t, int n) const {
  if (static_cast<int>(letters.size()) != sigma.letters())
    throw ArityMismatch("letter assignment width does not match alphabet");
  validate_tree(sigma, n, t);
  // structural fold
  std::function<CloneElem(const Tree&)> go = [&](const Tree& u) -> CloneElem {
    if (u.is_variable()) return target->variable(n, u.var_index());
    std::vector<CloneElem> args;
    args.reserve(u.children().size());
    for (const auto& c : u.children()) args.push_back(go(c));
    int k = sigma.arity(u.letter());
    return target->subst(k, n, letters[static_cast<size_t>(u.letter()) - 1], args);
  };
  return go(t);
}

CloneMorphism FreeMorphism::as_morphism(std::string name) const {
  CloneMorphism phi;
  phi.source = make_free_clone(sigma, target->guard());
  phi.target = target;
  phi.name = name.empty() ? "free" + sigma.format() + " -> " + target->describe()
                          : std::move(name);
  FreeMorphism self = *this;
  phi.component = [self](int n, const CloneElem& v) { return self.eval(v.as_tree(), n); };
  return phi;
}

std::vector<FreeMorphism> enumerate_morphisms(const RankedAlphabet& sigma,
                                              const ClonePtr& target) {
  std::vector<std::vector<CloneElem>> per;
  per.reserve(static_cast<size_t>(sigma.letters()));
  std::uint64_t total = 1;
  for (int j = 1; j <= sigma.letters(); ++j) {
    per.push_back(target->enumerate(sigma.arity(j)));
    auto m = checked_mul(total, per.back().size());
    if (!m || *m > target->guard())
      throw GuardExceeded(m ? *m : std::numeric_limits<std::uint64_t>::max(),
                          target->guard());
    total = *m;
  }
  std::vector<FreeMorphism> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<size_t> idx(per.size(), 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    FreeMorphism p;
    p.sigma = sigma;
    p.target = target;
    for (size_t j = 0; j < per.size(); ++j) p.letters.push_back(per[j][idx[j]]);
    out.push_back(std::move(p));
    for (size_t j = per.size(); j-- > 0;) {  // letter 1 most significant
      if (++idx[j] < per[j].size()) break;
      idx[j] = 0;
    }
  }
  return out;
}

std::optional<std::uint64_t> count_morphisms(const RankedAlphabet& sigma,
                                             const ClonePtr& target) {
  std::uint64_t total = 1;
  for (int j = 1; j <= sigma.letters(); ++j) {
    auto s = target->carrier_size(sigma.arity(j));
    if (!s) return std::nullopt;
    auto m = checked_mul(total, *s);
    if (!m) return std::nullopt;
    total = *m;
  }
  return total;
}

CloneElem eval_morphism(const FreeMorphism& p, const Tree& t, int n) {
  return p.eval(t, n);
}

FreeMorphism compose(const CloneMorphism& phi, const FreeMorphism& p) {
  FreeMorphism out;
  out.sigma = p.sigma;
  out.target = phi.target;
  out.letters.reserve(p.letters.size());
  for (int j = 1; j <= p.sigma.letters(); ++j)
    out.letters.push_back(
        phi.component(p.sigma.arity(j), p.letters[static_cast<size_t>(j) - 1]));
  return out;
}

RankedAlphabet single_letter_alphabet(int n) {
  RankedAlphabet a;
  a.arities = {n};
  return a;
}

FreeMorphism element_as_morphism(const ClonePtr& c, int n, const CloneElem& v) {
  FreeMorphism p;
  p.sigma = single_letter_alphabet(n);
  p.target = c;
  p.letters = {v};
  return p;
}

CloneMorphism cay(const ClonePtr& c, int m) {
  CloneMorphism phi;
  phi.source = c;
  phi.target = make_endo_carrier_clone(c, m, c->guard());
  phi.name = "cay^" + std::to_string(m);
  ClonePtr base = c;
  phi.component = [base, m](int n, const CloneElem& x) {
    return CloneElem::fn(n, [base, m, n, x](const std::vector<CloneElem>& ys) {
      return base->subst(n, m, x, ys);
    });
  };
  return phi;
}

CloneElem appvar(const ClonePtr& c, int n, const CloneElem& endo_elem) {
  std::vector<CloneElem> vars;
  vars.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) vars.push_back(c->variable(n, i));
  return endo_elem.fn_apply(vars);
}

ClonePtr make_image_clone(const FreeMorphism& p, std::uint64_t guard) {
  return std::make_shared<ImageClone>(p, guard);
}

CloneMorphism image_inclusion(const ClonePtr& image_clone) {
  auto img = std::dynamic_pointer_cast<const ImageClone>(image_clone);
  if (!img) throw UnsupportedOperation("image_inclusion needs an image clone");
  CloneMorphism phi;
  phi.source = image_clone;
  phi.target = img->presentation().target;
  phi.name = "inclusion";
  phi.component = [](int, const CloneElem& v) { return v; };
  return phi;
}

FreeMorphism image_surjection(const ClonePtr& image_clone) {
  auto img = std::dynamic_pointer_cast<const ImageClone>(image_clone);
  if (!img) throw UnsupportedOperation("image_surjection needs an image clone");
  FreeMorphism p;
  p.sigma = img->presentation().sigma;
  p.target = image_clone;
  p.letters = img->presentation().letters;
  return p;
}

std::pair<CloneMorphism, CloneMorphism> delta_endo_iso(int q, std::uint64_t guard) {
  ClonePtr endo = make_endo_clone(q, guard);
  ClonePtr delta = make_delta_clone(endo);
  ClonePtr power = make_power_clone(endo, q, guard);

  // An (n+1)-ary table is read as a Q-indexed family of n-ary tables by
  // splitting on the last (least significant) input.
  CloneMorphism fwd;
  fwd.source = delta;
  fwd.target = power;
  fwd.name = "delta-split";
  fwd.component = [q](int, const CloneElem& f) {
    const auto& tbl = f.as_table();
    std::uint64_t dom = tbl.size() / static_cast<size_t>(q);
    std::vector<CloneElem> comps;
    comps.reserve(static_cast<size_t>(q));
    for (int r = 0; r < q; ++r) {
      std::vector<int> sub(static_cast<size_t>(dom));
      for (std::uint64_t t = 0; t < dom; ++t)
        sub[static_cast<size_t>(t)] =
            tbl[static_cast<size_t>(t) * static_cast<size_t>(q) + static_cast<size_t>(r)];
      comps.push_back(CloneElem::table(q, f.table_arity() - 1, std::move(sub)));
    }
    return CloneElem::tuple(std::move(comps));
  };

  CloneMorphism bwd;
  bwd.source = power;
  bwd.target = delta;
  bwd.name = "delta-merge";
  bwd.component = [q](int n, const CloneElem& v) {
    const auto& comps = v.as_tuple();
    std::uint64_t dom = comps.front().as_table().size();
    std::vector<int> tbl(static_cast<size_t>(dom) * static_cast<size_t>(q));
    for (std::uint64_t t = 0; t < dom; ++t)
      for (int r = 0; r < q; ++r)
        tbl[static_cast<size_t>(t) * static_cast<size_t>(q) + static_cast<size_t>(r)] =
            comps[static_cast<size_t>(r)].as_table()[static_cast<size_t>(t)];
    return CloneElem::table(q, n + 1, std::move(tbl));
  };

  return {fwd, bwd};
}

// -------------------------------------------------------------- law checks ---

namespace {

// Visits index tuples over the given radices: all of them in odometer order
// (first position most significant) when the total is within `cap`, else
// `samples` seeded draws.  Returns {visited, exhaustive}.
std::pair<std::uint64_t, bool> visit_tuples(
    const std::vector<std::uint64_t>& radix, std::uint64_t cap, int samples,
    std::uint64_t seed, const std::function<bool(const std::vector<std::uint64_t>&)>& fn) {
  std::optional<std::uint64_t> total = 1;
  for (auto r : radix) {
    total = checked_mul(*total, r);
    if (!total) break;
  }
  if (total && *total == 0) return {0, true};
  std::vector<std::uint64_t> idx(radix.size(), 0);
  if (total && *total <= cap) {
    std::uint64_t visited = 0;
    for (std::uint64_t step = 0; step < *total; ++step) {
      ++visited;
      if (!fn(idx)) return {visited, true};
      for (size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < radix[k]) break;
        idx[k] = 0;
      }
    }
    return {visited, true};
  }
  std::mt19937_64 rng(seed);
  std::uint64_t visited = 0;
  for (int s = 0; s < samples; ++s) {
    for (size_t k = 0; k < idx.size(); ++k) idx[k] = rng() % radix[k];
    ++visited;
    if (!fn(idx)) return {visited, false};
  }
  return {visited, false};
}

std::string arity_tag(std::initializer_list<int> xs) {
  std::string s = "(";
  bool first = true;
  for (int x : xs) {
    if (!first) s += ",";
    s += std::to_string(x);
    first = false;
  }
  return s + ")";
}

}  // namespace

LawCheckResult check_clone_laws(const ClonePtr& c, const LawCheckOptions& opts) {
  LawCheckResult res;
  std::vector<std::vector<CloneElem>> S(static_cast<size_t>(opts.max_arity) + 1);
  for (int n = 0; n <= opts.max_arity; ++n)
    S[static_cast<size_t>(n)] = c->law_samples(n, opts.free_tree_size);

  // collect up to five witnesses per law so an early failure in one law does
  // not hide failures of the others
  std::map<std::string, int> seen;
  auto fail = [&](const std::string& law, const std::string& witness) {
    res.pass = false;
    int& count = seen[law];
    if (count < 5) res.failures.push_back({law, witness});
    return ++count < 5;
  };

  // subst(x; x1..xn) = x
  {
    std::uint64_t checked = 0;
    for (int n = 0; n <= opts.max_arity; ++n) {
      std::vector<CloneElem> vars;
      for (int i = 1; i <= n; ++i) vars.push_back(c->variable(n, i));
      for (const auto& x : S[static_cast<size_t>(n)]) {
        ++checked;
        if (!c->equal(n, c->subst(n, n, x, vars), x)) {
          if (!fail("unit", "n=" + std::to_string(n) + ", x=" + c->show(n, x))) break;
        }
      }
    }
    res.checked += checked;
    res.notes.push_back("unit: " + std::to_string(checked) + " elements, exhaustive over samples");
  }

  // subst(x_i; y1..ym) = y_i
  {
    std::uint64_t checked = 0;
    bool all_exhaustive = true;
    for (int m = 1; m <= opts.max_arity; ++m) {
      for (int n = 0; n <= opts.max_arity; ++n) {
        const auto& Sn = S[static_cast<size_t>(n)];
        std::vector<std::uint64_t> radix(static_cast<size_t>(m), Sn.size());
        for (int i = 1; i <= m; ++i) {
          CloneElem vi = c->variable(m, i);
          auto [visited, exhaustive] = visit_tuples(
              radix, opts.exhaustive_cap, opts.samples,
              opts.seed ^ (static_cast<std::uint64_t>(m) * 131 + n * 17 + i),
              [&](const std::vector<std::uint64_t>& idx) {
                std::vector<CloneElem> ys;
                ys.reserve(idx.size());
                for (auto k : idx) ys.push_back(Sn[static_cast<size_t>(k)]);
                if (!c->equal(n, c->subst(m, n, vi, ys), ys[static_cast<size_t>(i) - 1]))
                  return fail("projection",
                              "m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                                  ", i=" + std::to_string(i));
                return true;
              });
          checked += visited;
          if (!exhaustive) all_exhaustive = false;
        }
      }
    }
    res.checked += checked;
    if (!all_exhaustive) res.exhaustive = false;
    res.notes.push_back("projection: " + std::to_string(checked) + " instances" +
                        (all_exhaustive ? ", exhaustive over samples" : ", tuple space sampled"));
  }

  // subst(subst(x; ys); zs) = subst(x; subst(y_i; zs)..)
  {
    std::uint64_t checked = 0;
    bool all_exhaustive = true;
    for (int l = 0; l <= opts.max_arity; ++l)
      for (int m = 0; m <= opts.max_arity; ++m)
        for (int n = 0; n <= opts.max_arity; ++n) {
          const auto& Sl = S[static_cast<size_t>(l)];
          const auto& Sm = S[static_cast<size_t>(m)];
          const auto& Sn = S[static_cast<size_t>(n)];
          std::vector<std::uint64_t> radix;
          radix.push_back(Sl.size());
          for (int i = 0; i < l; ++i) radix.push_back(Sm.size());
          for (int i = 0; i < m; ++i) radix.push_back(Sn.size());
          auto [visited, exhaustive] = visit_tuples(
              radix, opts.exhaustive_cap, opts.samples,
              opts.seed ^ (static_cast<std::uint64_t>(l) * 9176 + m * 131 + n),
              [&](const std::vector<std::uint64_t>& idx) {
                const CloneElem& x = Sl[static_cast<size_t>(idx[0])];
                std::vector<CloneElem> ys, zs;
                for (int i = 0; i < l; ++i)
                  ys.push_back(Sm[static_cast<size_t>(idx[static_cast<size_t>(1 + i)])]);
                for (int i = 0; i < m; ++i)
                  zs.push_back(
                      Sn[static_cast<size_t>(idx[static_cast<size_t>(1 + l + i)])]);
                CloneElem lhs = c->subst(m, n, c->subst(l, m, x, ys), zs);
                std::vector<CloneElem> inner;
                inner.reserve(ys.size());
                for (const auto& y : ys) inner.push_back(c->subst(m, n, y, zs));
                CloneElem rhs = c->subst(l, n, x, inner);
                if (!c->equal(n, lhs, rhs)) {
                  std::string w = arity_tag({l, m, n}) + " x=" + c->show(l, x);
                  for (const auto& y : ys) w += " y=" + c->show(m, y);
                  for (const auto& z : zs) w += " z=" + c->show(n, z);
                  return fail("associativity", w);
                }
                return true;
              });
          checked += visited;
          if (!exhaustive) all_exhaustive = false;
        }
    res.checked += checked;
    if (!all_exhaustive) res.exhaustive = false;
    res.notes.push_back("associativity: " + std::to_string(checked) + " instances" +
                        (all_exhaustive ? ", exhaustive over samples"
                                        : ", tuple space sampled"));
  }

  return res;
}

LawCheckResult check_clone_morphism(const CloneMorphism& phi, const LawCheckOptions& opts) {
  LawCheckResult res;
  const ClonePtr& src = phi.source;
  const ClonePtr& tgt = phi.target;
  std::vector<std::vector<CloneElem>> S(static_cast<size_t>(opts.max_arity) + 1);
  for (int n = 0; n <= opts.max_arity; ++n)
    S[static_cast<size_t>(n)] = src->law_samples(n, opts.free_tree_size);

  std::map<std::string, int> seen;
  auto fail = [&](const std::string& law, const std::string& witness) {
    res.pass = false;
    int& count = seen[law];
    if (count < 5) res.failures.push_back({law, witness});
    return ++count < 5;
  };

  {
    std::uint64_t checked = 0;
    for (int n = 0; n <= opts.max_arity; ++n)
      for (int i = 1; i <= n; ++i) {
        ++checked;
        if (!tgt->equal(n, phi.component(n, src->variable(n, i)), tgt->variable(n, i)))
          if (!fail("morphism-variables", "n=" + std::to_string(n) + ", i=" + std::to_string(i)))
            break;
      }
    res.checked += checked;
    res.notes.push_back("variables: " + std::to_string(checked) + " instances");
  }

  {
    std::uint64_t checked = 0;
    bool all_exhaustive = true;
    for (int m = 0; m <= opts.max_arity; ++m)
      for (int n = 0; n <= opts.max_arity; ++n) {
        const auto& Sm = S[static_cast<size_t>(m)];
        const auto& Sn = S[static_cast<size_t>(n)];
        std::vector<std::uint64_t> radix;
        radix.push_back(Sm.size());
        for (int i = 0; i < m; ++i) radix.push_back(Sn.size());
        auto [visited, exhaustive] = visit_tuples(
            radix, opts.exhaustive_cap, opts.samples,
            opts.seed ^ (static_cast<std::uint64_t>(m) * 977 + n),
            [&](const std::vector<std::uint64_t>& idx) {
              const CloneElem& x = Sm[static_cast<size_t>(idx[0])];
              std::vector<CloneElem> ys;
              for (int i = 0; i < m; ++i)
                ys.push_back(Sn[static_cast<size_t>(idx[static_cast<size_t>(1 + i)])]);
              CloneElem lhs = phi.component(n, src->subst(m, n, x, ys));
              std::vector<CloneElem> phiys;
              phiys.reserve(ys.size());
              for (const auto& y : ys) phiys.push_back(phi.component(n, y));
              CloneElem rhs = tgt->subst(m, n, phi.component(m, x), phiys);
              if (!tgt->equal(n, lhs, rhs))
                return fail("morphism-subst",
                            arity_tag({m, n}) + " x=" + src->show(m, x));
              return true;
            });
        checked += visited;
        if (!exhaustive) all_exhaustive = false;
      }
    res.checked += checked;
    if (!all_exhaustive) res.exhaustive = false;
    res.notes.push_back("substitution: " + std::to_string(checked) + " instances" +
                        (all_exhaustive ? ", exhaustive over samples"
                                        : ", tuple space sampled"));
  }

  return res;
}

}  // namespace proftree
