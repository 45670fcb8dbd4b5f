#include "proftree/sem.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <sstream>

namespace proftree {

// ------------------------------------------------------------- SemValue ---

namespace {

// Function cells are identified by a serial number, never by address:
// memo tables key applications by argument, and a recycled allocation must
// not alias an extensionally different later value.
std::uint64_t next_cell_id() {
  static std::atomic<std::uint64_t> counter{0};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

struct SemValue::Cell {
  Kind kind;
  int base = 0;
  std::vector<SemValue> comps;
  std::function<SemValue(const SemValue&)> fn;
  const std::uint64_t id = next_cell_id();
  mutable std::mutex memo_mu;
  mutable std::map<std::string, SemValue> memo;
};

SemValue SemValue::base(int q) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Base;
  c->base = q;
  return SemValue(std::move(c));
}

SemValue SemValue::tuple(std::vector<SemValue> comps) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Tuple;
  c->comps = std::move(comps);
  return SemValue(std::move(c));
}

SemValue SemValue::fn(std::function<SemValue(const SemValue&)> apply) {
  auto c = std::make_shared<Cell>();
  c->kind = Kind::Fn;
  c->fn = std::move(apply);
  return SemValue(std::move(c));
}

SemValue::Kind SemValue::kind() const { return cell_->kind; }
int SemValue::base_elem() const { return cell_->base; }
const std::vector<SemValue>& SemValue::components() const { return cell_->comps; }

SemValue SemValue::apply(const SemValue& arg) const {
  assert(cell_->kind == Kind::Fn && "applying a non-function value");
  std::string k = arg.key();
  {
    std::lock_guard<std::mutex> lock(cell_->memo_mu);
    auto it = cell_->memo.find(k);
    if (it != cell_->memo.end()) return it->second;
  }
  SemValue out = cell_->fn(arg);
  {
    std::lock_guard<std::mutex> lock(cell_->memo_mu);
    cell_->memo.emplace(std::move(k), out);
  }
  return out;
}

std::string SemValue::key() const {
  switch (cell_->kind) {
    case Kind::Base:
      return std::to_string(cell_->base);
    case Kind::Tuple: {
      std::string s = "(";
      for (size_t i = 0; i < cell_->comps.size(); ++i) {
        if (i) s += ",";
        s += cell_->comps[i].key();
      }
      return s + ")";
    }
    case Kind::Fn:
      return "fn#" + std::to_string(cell_->id);
  }
  return "?";
}

std::vector<std::pair<std::string, std::string>> SemValue::observed_graph() const {
  std::vector<std::pair<std::string, std::string>> out;
  if (cell_->kind != Kind::Fn) return out;
  std::lock_guard<std::mutex> lock(cell_->memo_mu);
  for (const auto& [k, v] : cell_->memo) out.emplace_back(k, v.key());
  return out;
}

// ---------------------------------------------------------- cardinality ---

namespace {

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return std::nullopt;
  return a * b;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    auto m = checked_mul(acc, b);
    if (!m) return std::nullopt;
    acc = *m;
  }
  return acc;
}

}  // namespace

std::optional<std::uint64_t> domain_card(const Type& ty, int q) {
  switch (ty.kind()) {
    case Type::Kind::Base:
      return static_cast<std::uint64_t>(q);
    case Type::Kind::Arrow: {
      auto d = domain_card(ty.dom(), q);
      auto c = domain_card(ty.cod(), q);
      if (!d || !c) {
        // huge^0 = 1 and 1^huge = 1 still make sense
        if (d && *d == 0) return 1;
        if (c && *c == 1) return 1;
        return std::nullopt;
      }
      return checked_pow(*c, *d);
    }
    case Type::Kind::Product: {
      std::uint64_t acc = 1;
      for (const auto& comp : ty.components()) {
        auto c = domain_card(comp, q);
        if (!c) return std::nullopt;
        auto m = checked_mul(acc, *c);
        if (!m) return std::nullopt;
        acc = *m;
      }
      return acc;
    }
  }
  return std::nullopt;
}

namespace {

std::uint64_t card_or_throw(const Type& ty, int q, std::uint64_t guard) {
  auto c = domain_card(ty, q);
  if (!c) throw GuardExceeded(UINT64_MAX, guard);
  if (*c > guard) throw GuardExceeded(*c, guard);
  return *c;
}

}  // namespace

SemValue domain_at(const Type& ty, int q, std::uint64_t index, std::uint64_t guard) {
  switch (ty.kind()) {
    case Type::Kind::Base:
      return SemValue::base(static_cast<int>(index));
    case Type::Kind::Product: {
      const auto& comps = ty.components();
      // mixed radix, first component most significant
      std::vector<std::uint64_t> cards(comps.size());
      for (size_t i = 0; i < comps.size(); ++i)
        cards[i] = card_or_throw(comps[i], q, guard);
      std::vector<SemValue> vals;
      vals.reserve(comps.size());
      std::vector<std::uint64_t> digits(comps.size());
      for (size_t i = comps.size(); i-- > 0;) {
        digits[i] = index % cards[i];
        index /= cards[i];
      }
      for (size_t i = 0; i < comps.size(); ++i)
        vals.push_back(domain_at(comps[i], q, digits[i], guard));
      return SemValue::tuple(std::move(vals));
    }
    case Type::Kind::Arrow: {
      std::uint64_t dcard = card_or_throw(ty.dom(), q, guard);
      std::uint64_t ccard = card_or_throw(ty.cod(), q, guard);
      auto results = std::make_shared<std::vector<SemValue>>();
      std::vector<std::uint64_t> digits(dcard);
      for (size_t i = dcard; i-- > 0;) {
        digits[i] = index % ccard;
        index /= ccard;
      }
      for (std::uint64_t d : digits) results->push_back(domain_at(ty.cod(), q, d, guard));
      Type dom = ty.dom();
      return SemValue::fn([dom, q, guard, results](const SemValue& arg) {
        return (*results)[domain_index(dom, q, arg, guard)];
      });
    }
  }
  throw UnsupportedOperation("domain_at: unknown type");
}

std::uint64_t domain_index(const Type& ty, int q, const SemValue& v,
                           std::uint64_t guard) {
  switch (ty.kind()) {
    case Type::Kind::Base:
      return static_cast<std::uint64_t>(v.base_elem());
    case Type::Kind::Product: {
      const auto& comps = ty.components();
      std::uint64_t idx = 0;
      for (size_t i = 0; i < comps.size(); ++i) {
        std::uint64_t c = card_or_throw(comps[i], q, guard);
        idx = idx * c + domain_index(comps[i], q, v.components()[i], guard);
      }
      return idx;
    }
    case Type::Kind::Arrow: {
      std::uint64_t ccard = card_or_throw(ty.cod(), q, guard);
      card_or_throw(ty.dom(), q, guard);
      std::uint64_t idx = 0;
      for (const auto& d : enumerate_domain(ty.dom(), q, guard))
        idx = idx * ccard + domain_index(ty.cod(), q, v.apply(d), guard);
      return idx;
    }
  }
  throw UnsupportedOperation("domain_index: unknown type");
}

std::vector<SemValue> enumerate_domain(const Type& ty, int q, std::uint64_t guard) {
  std::uint64_t card = card_or_throw(ty, q, guard);
  std::vector<SemValue> out;
  out.reserve(card);
  for (std::uint64_t i = 0; i < card; ++i) out.push_back(domain_at(ty, q, i, guard));
  return out;
}

bool sem_equal(const Type& ty, int q, const SemValue& a, const SemValue& b,
               std::uint64_t guard) {
  switch (ty.kind()) {
    case Type::Kind::Base:
      return a.base_elem() == b.base_elem();
    case Type::Kind::Product: {
      const auto& comps = ty.components();
      for (size_t i = 0; i < comps.size(); ++i)
        if (!sem_equal(comps[i], q, a.components()[i], b.components()[i], guard))
          return false;
      return true;
    }
    case Type::Kind::Arrow: {
      for (const auto& d : enumerate_domain(ty.dom(), q, guard))
        if (!sem_equal(ty.cod(), q, a.apply(d), b.apply(d), guard)) return false;
      return true;
    }
  }
  return false;
}

std::string describe_value(const Type& ty, int q, const SemValue& v,
                           std::uint64_t guard) {
  std::ostringstream os;
  os << "(" << format_type(ty) << ", |Q|=" << q << ", ";
  try {
    os << "#" << domain_index(ty, q, v, guard) << ")";
  } catch (const GuardExceeded&) {
    os << "intensional";
    auto graph = v.observed_graph();
    if (!graph.empty()) {
      os << "{";
      size_t shown = 0;
      for (const auto& [k, val] : graph) {
        if (shown++) os << ", ";
        if (shown > 8) {
          os << "...";
          break;
        }
        os << k << "->" << val;
      }
      os << "}";
    }
    os << ")";
  }
  return os.str();
}

// -------------------------------------------------------- interpretation ---

namespace {

SemValue interp(const Term& t, int q, const std::vector<SemValue>& env) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return env[env.size() - 1 - static_cast<size_t>(t.index())];
    case Term::Kind::Lam: {
      Term body = t.body();
      std::vector<SemValue> captured = env;
      return SemValue::fn([body, q, captured](const SemValue& arg) {
        std::vector<SemValue> env2 = captured;
        env2.push_back(arg);
        return interp(body, q, env2);
      });
    }
    case Term::Kind::App:
      return interp(t.fn(), q, env).apply(interp(t.arg(), q, env));
    case Term::Kind::Tuple: {
      std::vector<SemValue> comps;
      comps.reserve(t.components().size());
      for (const auto& c : t.components()) comps.push_back(interp(c, q, env));
      return SemValue::tuple(std::move(comps));
    }
    case Term::Kind::Proj:
      return interp(t.subject(), q, env).components()[static_cast<size_t>(t.index()) - 1];
  }
  throw UnsupportedOperation("interp: unknown node");
}

}  // namespace

SemValue interp_term(const Term& t, int q, const std::vector<SemValue>& env) {
  return interp(t, q, env);
}

// ------------------------------------------------------ logical relations ---

FinRelation FinRelation::empty(int l, int r) {
  FinRelation rel;
  rel.left = l;
  rel.right = r;
  rel.matrix.assign(static_cast<size_t>(l) * r, 0);
  return rel;
}

FinRelation FinRelation::identity(int n) {
  FinRelation rel = empty(n, n);
  for (int i = 0; i < n; ++i) rel.set(i, i);
  return rel;
}

FinRelation FinRelation::from_pairs(int l, int r,
                                    const std::vector<std::pair<int, int>>& pairs) {
  FinRelation rel = empty(l, r);
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= l || b < 0 || b >= r)
      throw IndexOutOfRange("relation pair out of range");
    rel.set(a, b);
  }
  return rel;
}

FinRelation FinRelation::from_mask(int l, int r, std::uint64_t mask) {
  FinRelation rel = empty(l, r);
  for (size_t i = 0; i < rel.matrix.size(); ++i)
    rel.matrix[i] = (mask >> i) & 1 ? 1 : 0;
  return rel;
}

std::string FinRelation::describe() const {
  std::string s = "{";
  bool first = true;
  for (int a = 0; a < left; ++a)
    for (int b = 0; b < right; ++b)
      if (contains(a, b)) {
        if (!first) s += ",";
        first = false;
        s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
  return s + "}";
}

std::vector<FinRelation> enumerate_relations(int l, int r) {
  std::uint64_t bits = static_cast<std::uint64_t>(l) * r;
  if (bits > 12) throw GuardExceeded(bits, 12);
  std::vector<FinRelation> out;
  out.reserve(1ull << bits);
  for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask)
    out.push_back(FinRelation::from_mask(l, r, mask));
  return out;
}

namespace {

// Lifting a base relation through the type structure never needs to apply
// anything: a function value of an enumerable type IS its tuple of codomain
// indices, so the lifted relation can be computed as a bit matrix by index
// arithmetic alone.  Value-level checks then reduce to one index lookup,
// with a pointwise fallback at types whose matrix would not fit.
class RelChecker {
public:
  RelChecker(const FinRelation& r, std::uint64_t guard) : r_(r), guard_(guard) {}

  // entries in a materialized lift matrix; ~1 MiB of bits
  static constexpr std::uint64_t kMatrixCap = 1ull << 23;

  struct Lift {
    bool available = false;
    std::uint64_t lcard = 0, rcard = 0;
    std::vector<char> matrix;  // lcard x rcard, row-major
    bool contains(std::uint64_t i, std::uint64_t j) const {
      return matrix[i * rcard + j] != 0;
    }
  };

  const Lift& lift(const Type& ty) {
    std::string k = format_type(ty);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(std::move(k), build(ty)).first->second;
  }

  bool member(const Type& ty, const SemValue& v, const SemValue& w) {
    const Lift& lf = lift(ty);
    if (lf.available)
      return lf.contains(index_cached(ty, r_.left, v),
                         index_cached(ty, r_.right, w));
    switch (ty.kind()) {
      case Type::Kind::Base:
        return r_.contains(v.base_elem(), w.base_elem());
      case Type::Kind::Product: {
        const auto& comps = ty.components();
        for (size_t i = 0; i < comps.size(); ++i)
          if (!member(comps[i], v.components()[i], w.components()[i])) return false;
        return true;
      }
      case Type::Kind::Arrow: {
        // quantify over related argument pairs
        const Lift& dl = lift(ty.dom());
        const auto& ldom = domain(ty.dom(), r_.left);
        const auto& rdom = domain(ty.dom(), r_.right);
        if (dl.available) {
          for (std::uint64_t i = 0; i < dl.lcard; ++i)
            for (std::uint64_t j = 0; j < dl.rcard; ++j) {
              if (!dl.contains(i, j)) continue;
              if (!member(ty.cod(), v.apply(ldom[i]), w.apply(rdom[j])))
                return false;
            }
          return true;
        }
        for (const auto& x : ldom)
          for (const auto& y : rdom) {
            if (!member(ty.dom(), x, y)) continue;
            if (!member(ty.cod(), v.apply(x), w.apply(y))) return false;
          }
        return true;
      }
    }
    return false;
  }

private:
  const std::vector<SemValue>& domain(const Type& ty, int q) {
    std::string k = format_type(ty) + "@" + std::to_string(q);
    auto it = doms_.find(k);
    if (it != doms_.end()) return it->second;
    return doms_.emplace(std::move(k), enumerate_domain(ty, q, guard_)).first->second;
  }

  // Function values seen here are memo-stable across the quantifier loops,
  // so their keys make good cache handles for the expensive indexing step.
  std::uint64_t index_cached(const Type& ty, int q, const SemValue& v) {
    switch (ty.kind()) {
      case Type::Kind::Base:
        return static_cast<std::uint64_t>(v.base_elem());
      case Type::Kind::Product: {
        const auto& comps = ty.components();
        std::uint64_t idx = 0;
        for (size_t i = 0; i < comps.size(); ++i) {
          auto c = domain_card(comps[i], q);
          idx = idx * *c + index_cached(comps[i], q, v.components()[i]);
        }
        return idx;
      }
      case Type::Kind::Arrow: {
        std::string k = format_type(ty) + "@" + std::to_string(q) + ":" + v.key();
        auto it = idx_.find(k);
        if (it != idx_.end()) return it->second;
        auto ccard = domain_card(ty.cod(), q);
        std::uint64_t idx = 0;
        for (const auto& d : domain(ty.dom(), q))
          idx = idx * *ccard + index_cached(ty.cod(), q, v.apply(d));
        idx_.emplace(std::move(k), idx);
        return idx;
      }
    }
    return 0;
  }

  Lift build(const Type& ty) {
    Lift out;
    auto cl = domain_card(ty, r_.left);
    auto cr = domain_card(ty, r_.right);
    if (!cl || !cr || *cl > kMatrixCap || *cr > kMatrixCap ||
        (*cl != 0 && *cr > kMatrixCap / (*cl ? *cl : 1)))
      return out;
    std::uint64_t total = *cl * *cr;
    if (total > kMatrixCap) return out;
    switch (ty.kind()) {
      case Type::Kind::Base: {
        out.available = true;
        out.lcard = *cl;
        out.rcard = *cr;
        out.matrix = r_.matrix;
        return out;
      }
      case Type::Kind::Product: {
        const auto& comps = ty.components();
        std::vector<const Lift*> ls;
        std::vector<std::uint64_t> lc(comps.size()), rc(comps.size());
        for (size_t i = 0; i < comps.size(); ++i) {
          const Lift& l = lift(comps[i]);
          if (!l.available) return out;
          ls.push_back(&l);
          lc[i] = l.lcard;
          rc[i] = l.rcard;
        }
        out.available = true;
        out.lcard = *cl;
        out.rcard = *cr;
        out.matrix.assign(total, 0);
        for (std::uint64_t i = 0; i < *cl; ++i) {
          // decompose i into component digits (first most significant)
          std::vector<std::uint64_t> di(comps.size());
          std::uint64_t rest = i;
          for (size_t k = comps.size(); k-- > 0;) {
            di[k] = rest % lc[k];
            rest /= lc[k];
          }
          for (std::uint64_t j = 0; j < *cr; ++j) {
            std::uint64_t restj = j;
            bool ok = true;
            std::vector<std::uint64_t> dj(comps.size());
            for (size_t k = comps.size(); k-- > 0;) {
              dj[k] = restj % rc[k];
              restj /= rc[k];
            }
            for (size_t k = 0; k < comps.size() && ok; ++k)
              ok = ls[k]->contains(di[k], dj[k]);
            if (ok) out.matrix[i * *cr + j] = 1;
          }
        }
        return out;
      }
      case Type::Kind::Arrow: {
        const Lift& dl = lift(ty.dom());
        const Lift& cdl = lift(ty.cod());
        if (!dl.available || !cdl.available) return out;
        // collect related argument index pairs once
        std::vector<std::pair<std::uint64_t, std::uint64_t>> rel;
        for (std::uint64_t i = 0; i < dl.lcard; ++i)
          for (std::uint64_t j = 0; j < dl.rcard; ++j)
            if (dl.contains(i, j)) rel.emplace_back(i, j);
        out.available = true;
        out.lcard = *cl;
        out.rcard = *cr;
        out.matrix.assign(total, 0);
        // digit d of function index F at domain position p (of n) is
        // (F / cod^(n-1-p)) % cod
        std::vector<std::uint64_t> lpow(dl.lcard), rpow(dl.rcard);
        for (std::uint64_t p = 0; p < dl.lcard; ++p) {
          std::uint64_t e = dl.lcard - 1 - p, acc = 1;
          for (std::uint64_t k = 0; k < e; ++k) acc *= cdl.lcard;
          lpow[p] = acc;
        }
        for (std::uint64_t p = 0; p < dl.rcard; ++p) {
          std::uint64_t e = dl.rcard - 1 - p, acc = 1;
          for (std::uint64_t k = 0; k < e; ++k) acc *= cdl.rcard;
          rpow[p] = acc;
        }
        for (std::uint64_t f = 0; f < *cl; ++f)
          for (std::uint64_t g = 0; g < *cr; ++g) {
            bool ok = true;
            for (const auto& [i, j] : rel) {
              std::uint64_t df = (f / lpow[i]) % cdl.lcard;
              std::uint64_t dg = (g / rpow[j]) % cdl.rcard;
              if (!cdl.contains(df, dg)) {
                ok = false;
                break;
              }
            }
            if (ok) out.matrix[f * *cr + g] = 1;
          }
        return out;
      }
    }
    return out;
  }

  const FinRelation& r_;
  std::uint64_t guard_;
  std::map<std::string, Lift> cache_;
  std::map<std::string, std::vector<SemValue>> doms_;
  std::map<std::string, std::uint64_t> idx_;
};

}  // namespace

bool rel_member(const Type& ty, const FinRelation& r, const SemValue& left,
                const SemValue& right, std::uint64_t guard) {
  RelChecker checker(r, guard);
  return checker.member(ty, left, right);
}

bool fundamental_lemma_check(const Term& t, const FinRelation& r,
                             std::uint64_t guard) {
  Type ty = typecheck({}, t);
  SemValue l = interp_term(t, r.left);
  SemValue rv = interp_term(t, r.right);
  return rel_member(ty, r, l, rv, guard);
}

}  // namespace proftree
