#include "proftree/sig.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace proftree {
namespace {

constexpr std::uint64_t kComposeGuard = 1'000'000;

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

std::uint64_t pow_or_throw(std::uint64_t base, std::uint64_t exp) {
  auto p = checked_pow(base, exp);
  if (!p) throw UnsupportedOperation("signature size overflows 64 bits");
  return *p;
}

std::uint64_t mul_or_throw(std::uint64_t a, std::uint64_t b) {
  auto m = checked_mul(a, b);
  if (!m) throw UnsupportedOperation("signature size overflows 64 bits");
  return *m;
}

std::uint64_t add_or_throw(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw UnsupportedOperation("signature size overflows 64 bits");
  return a + b;
}

void check_arity_nonneg(int n) {
  if (n < 0)
    throw IndexOutOfRange("negative arity " + std::to_string(n));
}

void check_function(int m, int n, const std::vector<int>& f) {
  check_arity_nonneg(m);
  check_arity_nonneg(n);
  if (static_cast<int>(f.size()) != m)
    throw ArityMismatch("function table has " + std::to_string(f.size()) +
                        " entries, expected " + std::to_string(m));
  for (int v : f)
    if (v < 0 || v >= n)
      throw IndexOutOfRange("function value " + std::to_string(v) +
                            " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

// -------------------------------------------------------------- Signature ---

Signature Signature::representables(std::vector<int> arities) {
  for (int a : arities) check_arity_nonneg(a);
  Signature s;
  s.representable_ = true;
  s.arities_ = std::move(arities);
  return s;
}

Signature Signature::representable(int arity) {
  return representables({arity});
}

Signature Signature::unit() { return representables({1}); }

Signature Signature::constant() { return representables({0}); }

Signature Signature::none() { return representables({}); }

Signature Signature::from_alphabet(const RankedAlphabet& sigma) {
  return representables(sigma.arities);
}

Signature Signature::tabulate(const Signature& x, int bound) {
  check_arity_nonneg(bound);
  std::vector<std::uint64_t> sizes(static_cast<size_t>(bound) + 1);
  std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> tables(
      static_cast<size_t>(bound) + 1);
  for (int n = 0; n <= bound; ++n)
    sizes[static_cast<size_t>(n)] = x.size_at(n);
  for (int m = 0; m <= bound; ++m) {
    tables[static_cast<size_t>(m)].resize(static_cast<size_t>(bound) + 1);
    for (int n = 0; n <= bound; ++n) {
      auto fns = all_functions(m, n);
      auto& slot = tables[static_cast<size_t>(m)][static_cast<size_t>(n)];
      slot.reserve(fns.size());
      for (const auto& f : fns) {
        std::vector<std::uint64_t> img(sizes[static_cast<size_t>(m)]);
        for (std::uint64_t e = 0; e < img.size(); ++e)
          img[e] = x.act(m, n, f, e);
        slot.push_back(std::move(img));
      }
    }
  }
  return tabulated(std::move(sizes), std::move(tables));
}

Signature Signature::tabulated(
    std::vector<std::uint64_t> sizes,
    std::vector<std::vector<std::vector<std::vector<std::uint64_t>>>> tables) {
  if (sizes.empty())
    throw ArityMismatch("tabulated signature needs sizes for arity 0 upward");
  const size_t grid = sizes.size();
  if (tables.size() != grid)
    throw ArityMismatch("tabulated signature has " +
                        std::to_string(tables.size()) +
                        " table rows for a grid of " + std::to_string(grid));
  for (size_t m = 0; m < grid; ++m) {
    if (tables[m].size() != grid)
      throw ArityMismatch("tabulated signature row " + std::to_string(m) +
                          " has " + std::to_string(tables[m].size()) +
                          " columns");
    for (size_t n = 0; n < grid; ++n) {
      const std::uint64_t fn_count = pow_or_throw(n, m);
      if (tables[m][n].size() != fn_count)
        throw ArityMismatch("tabulated signature cell (" + std::to_string(m) +
                            ", " + std::to_string(n) + ") has " +
                            std::to_string(tables[m][n].size()) +
                            " function tables, expected " +
                            std::to_string(fn_count));
      for (const auto& img : tables[m][n]) {
        if (img.size() != sizes[m])
          throw ArityMismatch("tabulated action column has " +
                              std::to_string(img.size()) +
                              " entries, expected " + std::to_string(sizes[m]));
        for (std::uint64_t v : img)
          if (v >= sizes[n])
            throw IndexOutOfRange("tabulated action value " +
                                  std::to_string(v) + " outside target set");
      }
    }
  }
  Signature s;
  s.representable_ = false;
  s.sizes_ = std::move(sizes);
  s.tables_ = std::move(tables);
  return s;
}

const std::vector<int>& Signature::arities() const {
  if (!representable_)
    throw UnsupportedOperation(
        "arity list is only available for coproducts of representables");
  return arities_;
}

int Signature::summand_count() const {
  return static_cast<int>(arities().size());
}

int Signature::grid_bound() const {
  if (representable_)
    throw UnsupportedOperation(
        "grid bound is only available for tabulated signatures");
  return static_cast<int>(sizes_.size()) - 1;
}

std::uint64_t Signature::size_at(int n) const {
  check_arity_nonneg(n);
  if (representable_) {
    std::uint64_t total = 0;
    for (int a : arities_)
      total = add_or_throw(total, pow_or_throw(static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(a)));
    return total;
  }
  if (static_cast<size_t>(n) >= sizes_.size())
    throw IndexOutOfRange("arity " + std::to_string(n) +
                          " beyond tabulated bound " +
                          std::to_string(sizes_.size() - 1));
  return sizes_[static_cast<size_t>(n)];
}

std::uint64_t Signature::act(int m, int n, const std::vector<int>& f,
                             std::uint64_t elem) const {
  check_function(m, n, f);
  if (representable_) {
    auto [summand, pick] = decode(m, elem);
    for (int& v : pick) v = f[static_cast<size_t>(v)];
    return encode(n, summand, pick);
  }
  if (static_cast<size_t>(m) >= sizes_.size() ||
      static_cast<size_t>(n) >= sizes_.size())
    throw IndexOutOfRange("arity pair (" + std::to_string(m) + ", " +
                          std::to_string(n) + ") beyond tabulated bound");
  if (elem >= sizes_[static_cast<size_t>(m)])
    throw IndexOutOfRange("element " + std::to_string(elem) +
                          " outside the tabulated set at arity " +
                          std::to_string(m));
  const auto& img =
      tables_[static_cast<size_t>(m)][static_cast<size_t>(n)]
             [function_index(n, f)];
  return img[elem];
}

std::pair<int, std::vector<int>> Signature::decode(int n,
                                                   std::uint64_t elem) const {
  check_arity_nonneg(n);
  if (!representable_)
    throw UnsupportedOperation(
        "element decoding needs the coproduct-of-representables form");
  std::uint64_t rest = elem;
  for (size_t i = 0; i < arities_.size(); ++i) {
    const std::uint64_t block = pow_or_throw(
        static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(arities_[i]));
    if (rest < block) {
      std::vector<int> pick(static_cast<size_t>(arities_[i]));
      for (size_t k = pick.size(); k-- > 0;) {
        pick[k] = static_cast<int>(rest % static_cast<std::uint64_t>(n));
        rest /= static_cast<std::uint64_t>(n);
      }
      return {static_cast<int>(i), std::move(pick)};
    }
    rest -= block;
  }
  throw IndexOutOfRange("element " + std::to_string(elem) +
                        " outside the signature at arity " + std::to_string(n));
}

std::uint64_t Signature::encode(int n, int summand,
                                const std::vector<int>& pick) const {
  check_arity_nonneg(n);
  if (!representable_)
    throw UnsupportedOperation(
        "element encoding needs the coproduct-of-representables form");
  if (summand < 0 || static_cast<size_t>(summand) >= arities_.size())
    throw IndexOutOfRange("summand " + std::to_string(summand) +
                          " outside the signature");
  const int a = arities_[static_cast<size_t>(summand)];
  if (static_cast<int>(pick.size()) != a)
    throw ArityMismatch("pick has " + std::to_string(pick.size()) +
                        " coordinates, summand arity is " + std::to_string(a));
  std::uint64_t offset = 0;
  for (int i = 0; i < summand; ++i)
    offset = add_or_throw(
        offset, pow_or_throw(static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(
                                 arities_[static_cast<size_t>(i)])));
  std::uint64_t idx = 0;
  for (int v : pick) {
    if (v < 0 || v >= n)
      throw IndexOutOfRange("pick coordinate " + std::to_string(v) +
                            " outside [0, " + std::to_string(n) + ")");
    idx = idx * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
  }
  return offset + idx;
}

std::string Signature::describe() const {
  std::ostringstream os;
  if (representable_) {
    if (arities_.empty()) return "0";
    for (size_t i = 0; i < arities_.size(); ++i) {
      if (i) os << " + ";
      os << "y" << arities_[i];
    }
    return os.str();
  }
  os << "tabulated(bound " << sizes_.size() - 1 << "; sizes";
  for (size_t n = 0; n < sizes_.size(); ++n) os << " " << sizes_[n];
  os << ")";
  return os.str();
}

std::string Signature::describe_element(int n, std::uint64_t elem) const {
  if (!representable_) return "#" + std::to_string(elem);
  auto [summand, pick] = decode(n, elem);
  std::ostringstream os;
  os << "g" << summand;
  if (!pick.empty()) {
    os << "(";
    for (size_t k = 0; k < pick.size(); ++k) {
      if (k) os << ",";
      os << pick[k];
    }
    os << ")";
  }
  return os.str();
}

// ------------------------------------------------------ function utilities ---

std::vector<std::vector<int>> all_functions(int m, int n) {
  check_arity_nonneg(m);
  check_arity_nonneg(n);
  std::vector<std::vector<int>> out;
  if (m == 0) {
    out.push_back({});
    return out;
  }
  if (n == 0) return out;  // no functions from a nonempty set into the empty one
  std::vector<int> f(static_cast<size_t>(m), 0);
  for (;;) {
    out.push_back(f);
    int k = m - 1;
    while (k >= 0 && f[static_cast<size_t>(k)] == n - 1) {
      f[static_cast<size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++f[static_cast<size_t>(k)];
  }
  return out;
}

std::uint64_t function_index(int n, const std::vector<int>& f) {
  check_function(static_cast<int>(f.size()), n, f);
  std::uint64_t idx = 0;
  for (int v : f)
    idx = idx * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
  return idx;
}

bool functoriality_ok(const Signature& x, int bound) {
  check_arity_nonneg(bound);
  for (int n = 0; n <= bound; ++n) {
    std::vector<int> id(static_cast<size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    for (std::uint64_t e = 0; e < x.size_at(n); ++e)
      if (x.act(n, n, id, e) != e) return false;
  }
  for (int m = 0; m <= bound; ++m)
    for (int n = 0; n <= bound; ++n)
      for (int p = 0; p <= bound; ++p)
        for (const auto& f : all_functions(m, n))
          for (const auto& g : all_functions(n, p)) {
            std::vector<int> gf(static_cast<size_t>(m));
            for (int k = 0; k < m; ++k)
              gf[static_cast<size_t>(k)] = g[static_cast<size_t>(
                  f[static_cast<size_t>(k)])];
            for (std::uint64_t e = 0; e < x.size_at(m); ++e)
              if (x.act(n, p, g, x.act(m, n, f, e)) != x.act(m, p, gf, e))
                return false;
          }
  return true;
}

// ------------------------------------------------------------- composition ---

Composite compose_with_provenance(const Signature& x, const Signature& xp) {
  if (!x.representable_form() || !xp.representable_form())
    throw UnsupportedOperation(
        "composition is only computed for coproducts of representables; "
        "tabulated families have no canonical composite labels");
  const auto& left = x.arities();
  const int right_count = xp.summand_count();
  std::uint64_t summands = 0;
  for (int a : left)
    summands = add_or_throw(
        summands, pow_or_throw(static_cast<std::uint64_t>(right_count),
                               static_cast<std::uint64_t>(a)));
  if (summands > kComposeGuard) throw GuardExceeded(summands, kComposeGuard);

  std::vector<int> arities;
  std::vector<ComposedSummand> provenance;
  arities.reserve(summands);
  provenance.reserve(summands);
  for (size_t i = 0; i < left.size(); ++i) {
    const int a = left[i];
    std::vector<int> t(static_cast<size_t>(a), 0);
    if (a > 0 && right_count == 0) continue;  // no tuples to draw
    for (;;) {
      int total = 0;
      for (int j : t) total += xp.arities()[static_cast<size_t>(j)];
      arities.push_back(total);
      provenance.push_back({static_cast<int>(i), t});
      int k = a - 1;
      while (k >= 0 && t[static_cast<size_t>(k)] == right_count - 1) {
        t[static_cast<size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
      ++t[static_cast<size_t>(k)];
    }
  }
  return {Signature::representables(std::move(arities)), std::move(provenance)};
}

Signature compose_signatures(const Signature& x, const Signature& xp) {
  return compose_with_provenance(x, xp).sig;
}

// ----------------------------------------------------------------- GridMap ---

namespace {

void check_grid_shape(const Signature& src, const GridMap& gm) {
  if (gm.bound < 0 || gm.images.size() != static_cast<size_t>(gm.bound) + 1)
    throw ArityMismatch("grid map stores " + std::to_string(gm.images.size()) +
                        " arities for bound " + std::to_string(gm.bound));
  for (int n = 0; n <= gm.bound; ++n)
    if (gm.images[static_cast<size_t>(n)].size() != src.size_at(n))
      throw ArityMismatch("grid map at arity " + std::to_string(n) + " has " +
                          std::to_string(gm.images[static_cast<size_t>(n)].size()) +
                          " entries, source has " +
                          std::to_string(src.size_at(n)));
}

// Build a grid map out of a literal composite by reassigning each composite
// summand to a target summand while keeping the pick coordinates.
GridMap map_composite_summands(const Composite& comp, const Signature& dst,
                               const std::vector<int>& target_summand,
                               int bound) {
  check_arity_nonneg(bound);
  GridMap gm;
  gm.bound = bound;
  gm.images.resize(static_cast<size_t>(bound) + 1);
  for (int n = 0; n <= bound; ++n) {
    const std::uint64_t sz = comp.sig.size_at(n);
    auto& row = gm.images[static_cast<size_t>(n)];
    row.resize(sz);
    for (std::uint64_t e = 0; e < sz; ++e) {
      auto [s, pick] = comp.sig.decode(n, e);
      row[e] = dst.encode(n, target_summand[static_cast<size_t>(s)], pick);
    }
  }
  return gm;
}

}  // namespace

bool grid_map_bijective(const Signature& src, const Signature& dst,
                        const GridMap& gm) {
  check_grid_shape(src, gm);
  for (int n = 0; n <= gm.bound; ++n) {
    const std::uint64_t dn = dst.size_at(n);
    if (src.size_at(n) != dn) return false;
    std::vector<char> seen(dn, 0);
    for (std::uint64_t v : gm.images[static_cast<size_t>(n)]) {
      if (v >= dn || seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

bool grid_map_natural(const Signature& src, const Signature& dst,
                      const GridMap& gm) {
  check_grid_shape(src, gm);
  for (int m = 0; m <= gm.bound; ++m)
    for (int n = 0; n <= gm.bound; ++n)
      for (const auto& f : all_functions(m, n))
        for (std::uint64_t e = 0; e < src.size_at(m); ++e) {
          const std::uint64_t via_src =
              gm.images[static_cast<size_t>(n)][src.act(m, n, f, e)];
          const std::uint64_t via_dst =
              dst.act(m, n, f, gm.images[static_cast<size_t>(m)][e]);
          if (via_src != via_dst) return false;
        }
  return true;
}

GridMap unit_left_iso(const Signature& x, int bound) {
  Composite comp = compose_with_provenance(Signature::unit(), x);
  std::vector<int> target;
  target.reserve(comp.provenance.size());
  for (const auto& pr : comp.provenance) target.push_back(pr.right.at(0));
  return map_composite_summands(comp, x, target, bound);
}

GridMap unit_right_iso(const Signature& x, int bound) {
  Composite comp = compose_with_provenance(x, Signature::unit());
  std::vector<int> target;
  target.reserve(comp.provenance.size());
  for (const auto& pr : comp.provenance) target.push_back(pr.left);
  return map_composite_summands(comp, x, target, bound);
}

GridMap absorb_left_iso(const Signature& x, int bound) {
  Composite comp = compose_with_provenance(Signature::constant(), x);
  std::vector<int> target(comp.provenance.size(), 0);
  return map_composite_summands(comp, Signature::constant(), target, bound);
}

// ----------------------------------------------------------- two-sorted sets ---

PointedPair semidirect(PointedPair p, PointedPair r) {
  if (p.q < 0 || p.a < 0 || r.q < 0 || r.a < 0)
    throw IndexOutOfRange("pair carriers must be non-negative");
  const long long first = static_cast<long long>(p.q) +
                          static_cast<long long>(p.a) * r.q;
  const long long second = static_cast<long long>(p.a) * r.a;
  if (first > std::numeric_limits<int>::max() ||
      second > std::numeric_limits<int>::max())
    throw UnsupportedOperation("semidirect pair exceeds the int carrier range");
  return {static_cast<int>(first), static_cast<int>(second)};
}

std::string semidirect_state_label(PointedPair p, PointedPair r, int x) {
  const PointedPair pr = semidirect(p, r);
  if (x < 0 || x >= pr.q)
    throw IndexOutOfRange("state " + std::to_string(x) +
                          " outside the semidirect first carrier");
  if (x < p.q) return "q" + std::to_string(x);
  const int k = x - p.q;
  return "(a" + std::to_string(k / r.q) + ", q" + std::to_string(k % r.q) + ")";
}

std::string semidirect_letter_label(PointedPair p, PointedPair r, int x) {
  const PointedPair pr = semidirect(p, r);
  if (x < 0 || x >= pr.a)
    throw IndexOutOfRange("letter " + std::to_string(x) +
                          " outside the semidirect second carrier");
  return "(a" + std::to_string(x / r.a) + ", b" + std::to_string(x % r.a) + ")";
}

Signature setsig(PointedPair p) {
  if (p.q < 0 || p.a < 0)
    throw IndexOutOfRange("pair carriers must be non-negative");
  std::vector<int> arities;
  arities.reserve(static_cast<size_t>(p.q) + static_cast<size_t>(p.a));
  arities.insert(arities.end(), static_cast<size_t>(p.q), 0);
  arities.insert(arities.end(), static_cast<size_t>(p.a), 1);
  return Signature::representables(std::move(arities));
}

PointedPair sigset(const Signature& x) {
  const std::uint64_t x0 = x.size_at(0);
  const std::uint64_t x1 = x.size_at(1);
  if (x0 + x1 > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw UnsupportedOperation("signature too large for a pair carrier");
  return {static_cast<int>(x0), static_cast<int>(x0 + x1)};
}

PointedPair sigset_adjoint(const Signature& x) {
  const std::uint64_t x0 = x.size_at(0);
  const std::uint64_t x1 = x.size_at(1);
  if (x0 > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) ||
      x1 > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
    throw UnsupportedOperation("signature too large for a pair carrier");
  return {static_cast<int>(x0), static_cast<int>(x1)};
}

std::uint64_t set_pair_hom_count(PointedPair p, PointedPair r) {
  return mul_or_throw(pow_or_throw(static_cast<std::uint64_t>(r.q),
                                   static_cast<std::uint64_t>(p.q)),
                      pow_or_throw(static_cast<std::uint64_t>(r.a),
                                   static_cast<std::uint64_t>(p.a)));
}

std::uint64_t natural_transformation_count(const Signature& x,
                                           const Signature& y, int bound,
                                           std::uint64_t guard) {
  check_arity_nonneg(bound);
  std::vector<std::uint64_t> sx(static_cast<size_t>(bound) + 1);
  std::vector<std::uint64_t> sy(static_cast<size_t>(bound) + 1);
  std::uint64_t candidates = 1;
  for (int n = 0; n <= bound; ++n) {
    sx[static_cast<size_t>(n)] = x.size_at(n);
    sy[static_cast<size_t>(n)] = y.size_at(n);
    auto block = checked_pow(sy[static_cast<size_t>(n)],
                             sx[static_cast<size_t>(n)]);
    auto total = block ? checked_mul(candidates, *block) : std::nullopt;
    if (!total || *total > guard)
      throw GuardExceeded(total.value_or(
                              std::numeric_limits<std::uint64_t>::max()),
                          guard);
    candidates = *total;
  }
  if (candidates == 0) return 0;

  // One assignment slot per (arity, element); odometer over all of them.
  struct Slot {
    int n;
    std::uint64_t elem;
  };
  std::vector<Slot> slots;
  for (int n = 0; n <= bound; ++n)
    for (std::uint64_t e = 0; e < sx[static_cast<size_t>(n)]; ++e)
      slots.push_back({n, e});
  std::vector<std::uint64_t> choice(slots.size(), 0);
  // images[n][e] = current candidate value
  std::vector<std::vector<std::uint64_t>> images(static_cast<size_t>(bound) +
                                                 1);
  for (int n = 0; n <= bound; ++n)
    images[static_cast<size_t>(n)].resize(sx[static_cast<size_t>(n)]);

  // Precompute the source action once; the target action is cheap to query.
  struct Constraint {
    int m, n;
    std::vector<int> f;
    std::vector<std::uint64_t> src_image;  // x.act(m, n, f, e) per e
  };
  std::vector<Constraint> constraints;
  for (int m = 0; m <= bound; ++m)
    for (int n = 0; n <= bound; ++n)
      for (const auto& f : all_functions(m, n)) {
        Constraint c{m, n, f, {}};
        c.src_image.resize(sx[static_cast<size_t>(m)]);
        for (std::uint64_t e = 0; e < sx[static_cast<size_t>(m)]; ++e)
          c.src_image[e] = x.act(m, n, f, e);
        constraints.push_back(std::move(c));
      }

  std::uint64_t count = 0;
  for (;;) {
    for (size_t s = 0; s < slots.size(); ++s)
      images[static_cast<size_t>(slots[s].n)][slots[s].elem] = choice[s];
    bool natural = true;
    for (const auto& c : constraints) {
      for (std::uint64_t e = 0; e < sx[static_cast<size_t>(c.m)]; ++e) {
        const std::uint64_t lhs =
            images[static_cast<size_t>(c.n)][c.src_image[e]];
        const std::uint64_t rhs =
            y.act(c.m, c.n, c.f, images[static_cast<size_t>(c.m)][e]);
        if (lhs != rhs) {
          natural = false;
          break;
        }
      }
      if (!natural) break;
    }
    if (natural) ++count;
    size_t k = slots.size();
    while (k-- > 0) {
      if (++choice[k] < sy[static_cast<size_t>(slots[k].n)]) break;
      choice[k] = 0;
      if (k == 0) return count;
    }
    if (slots.empty()) return count;  // single empty assignment
  }
}

std::uint64_t natural_transformation_count_formula(const Signature& x,
                                                   const Signature& y) {
  std::uint64_t total = 1;
  for (int a : x.arities()) total = mul_or_throw(total, y.size_at(a));
  return total;
}

AdjunctionCount adjunction_count(PointedPair p, const Signature& x) {
  AdjunctionCount out;
  out.sig_side = natural_transformation_count_formula(setsig(p), x);
  out.adjoint_side = set_pair_hom_count(p, sigset_adjoint(x));
  out.construction_side = set_pair_hom_count(p, sigset(x));
  return out;
}

GridMap setsig_coherence(PointedPair p, PointedPair r, int bound) {
  Composite comp = compose_with_provenance(setsig(p), setsig(r));
  const PointedPair pr = semidirect(p, r);
  const Signature dst = setsig(pr);
  std::vector<int> target;
  target.reserve(comp.provenance.size());
  for (const auto& prv : comp.provenance) {
    if (prv.left < p.q) {
      target.push_back(prv.left);  // a state of p stays a state
      continue;
    }
    const int a = prv.left - p.q;
    const int j = prv.right.at(0);
    if (j < r.q)  // a letter of p applied to a state of r becomes a state
      target.push_back(p.q + a * r.q + j);
    else  // letter applied to a letter stays a letter
      target.push_back(pr.q + a * r.a + (j - r.q));
  }
  return map_composite_summands(comp, dst, target, bound);
}

// --------------------------------------------------------- free iteration ---

std::vector<Tree> free_iteration(const RankedAlphabet& sigma, int depth, int n,
                                 std::uint64_t guard) {
  if (depth < 0) throw IndexOutOfRange("negative iteration depth");
  if (n < 0) throw IndexOutOfRange("negative variable count");
  std::vector<Tree> stage;
  for (int k = 1; k <= depth; ++k) {
    std::uint64_t next_size = static_cast<std::uint64_t>(n);
    if (k >= 2)
      for (int j = 1; j <= sigma.letters(); ++j)
        next_size = add_or_throw(
            next_size, pow_or_throw(stage.size(),
                                    static_cast<std::uint64_t>(
                                        sigma.arity(j))));
    if (next_size > guard) throw GuardExceeded(next_size, guard);

    std::vector<Tree> next;
    next.reserve(next_size);
    for (int i = 1; i <= n; ++i) next.push_back(Tree::variable(i));
    if (k >= 2) {
      for (int j = 1; j <= sigma.letters(); ++j) {
        const int a = sigma.arity(j);
        if (a > 0 && stage.empty()) continue;
        std::vector<size_t> idx(static_cast<size_t>(a), 0);
        for (;;) {
          std::vector<Tree> children;
          children.reserve(static_cast<size_t>(a));
          for (size_t c = 0; c < idx.size(); ++c)
            children.push_back(stage[idx[c]]);
          next.push_back(Tree::node(j, std::move(children)));
          size_t c = idx.size();
          bool done = true;
          while (c-- > 0) {
            if (++idx[c] < stage.size()) {
              done = false;
              break;
            }
            idx[c] = 0;
          }
          if (done) break;
        }
      }
    }
    stage = std::move(next);
  }
  return stage;
}

// ------------------------------------------------------------ SetPairMap ---

namespace {

void check_pair_map(const SetPairMap& m, const char* what) {
  if (m.first.size() != static_cast<size_t>(m.dom.q) ||
      m.second.size() != static_cast<size_t>(m.dom.a))
    throw ArityMismatch(std::string(what) + ": table sizes (" +
                        std::to_string(m.first.size()) + ", " +
                        std::to_string(m.second.size()) +
                        ") do not match the domain (" +
                        std::to_string(m.dom.q) + ", " +
                        std::to_string(m.dom.a) + ")");
  for (int v : m.first)
    if (v < 0 || v >= m.cod.q)
      throw IndexOutOfRange(std::string(what) +
                            ": first-component value " + std::to_string(v) +
                            " outside the codomain");
  for (int v : m.second)
    if (v < 0 || v >= m.cod.a)
      throw IndexOutOfRange(std::string(what) +
                            ": second-component value " + std::to_string(v) +
                            " outside the codomain");
}

}  // namespace

SetPairMap identity_map(PointedPair p) {
  SetPairMap m;
  m.dom = m.cod = p;
  m.first.resize(static_cast<size_t>(p.q));
  std::iota(m.first.begin(), m.first.end(), 0);
  m.second.resize(static_cast<size_t>(p.a));
  std::iota(m.second.begin(), m.second.end(), 0);
  return m;
}

SetPairMap compose(const SetPairMap& g, const SetPairMap& f) {
  check_pair_map(f, "composition (inner map)");
  check_pair_map(g, "composition (outer map)");
  if (!(f.cod == g.dom))
    throw ArityMismatch("composition: inner codomain (" +
                        std::to_string(f.cod.q) + ", " +
                        std::to_string(f.cod.a) +
                        ") does not match outer domain (" +
                        std::to_string(g.dom.q) + ", " +
                        std::to_string(g.dom.a) + ")");
  SetPairMap h;
  h.dom = f.dom;
  h.cod = g.cod;
  h.first.reserve(f.first.size());
  for (int v : f.first) h.first.push_back(g.first[static_cast<size_t>(v)]);
  h.second.reserve(f.second.size());
  for (int v : f.second) h.second.push_back(g.second[static_cast<size_t>(v)]);
  return h;
}

SetPairMap tensor(const SetPairMap& phi, const SetPairMap& psi) {
  check_pair_map(phi, "tensor (left map)");
  check_pair_map(psi, "tensor (right map)");
  SetPairMap m;
  m.dom = semidirect(phi.dom, psi.dom);
  m.cod = semidirect(phi.cod, psi.cod);
  m.first.reserve(static_cast<size_t>(m.dom.q));
  for (int x = 0; x < m.dom.q; ++x) {
    if (x < phi.dom.q) {
      m.first.push_back(phi.first[static_cast<size_t>(x)]);
    } else {
      const int k = x - phi.dom.q;
      const int a = k / psi.dom.q;
      const int y = k % psi.dom.q;
      m.first.push_back(phi.cod.q +
                        phi.second[static_cast<size_t>(a)] * psi.cod.q +
                        psi.first[static_cast<size_t>(y)]);
    }
  }
  m.second.reserve(static_cast<size_t>(m.dom.a));
  for (int x = 0; x < m.dom.a; ++x) {
    const int a = x / psi.dom.a;
    const int b = x % psi.dom.a;
    m.second.push_back(phi.second[static_cast<size_t>(a)] * psi.cod.a +
                       psi.second[static_cast<size_t>(b)]);
  }
  return m;
}

SetPairMap left_unitor(PointedPair p) {
  const PointedPair one{0, 1};
  SetPairMap m;
  m.dom = semidirect(one, p);
  m.cod = p;
  m.first.reserve(static_cast<size_t>(m.dom.q));
  for (int x = 0; x < m.dom.q; ++x) m.first.push_back(x % p.q);
  m.second.reserve(static_cast<size_t>(m.dom.a));
  for (int x = 0; x < m.dom.a; ++x) m.second.push_back(x % p.a);
  return m;
}

SetPairMap right_unitor(PointedPair p) {
  const PointedPair one{0, 1};
  SetPairMap m;
  m.dom = semidirect(p, one);
  m.cod = p;
  m.first.reserve(static_cast<size_t>(m.dom.q));
  for (int x = 0; x < m.dom.q; ++x) m.first.push_back(x);  // no pair block
  m.second.reserve(static_cast<size_t>(m.dom.a));
  for (int x = 0; x < m.dom.a; ++x) m.second.push_back(x);  // (a, *) = a
  return m;
}

SetPairMap associator(PointedPair p, PointedPair r, PointedPair s) {
  const PointedPair pr = semidirect(p, r);
  const PointedPair rs = semidirect(r, s);
  SetPairMap m;
  m.dom = semidirect(pr, s);
  m.cod = semidirect(p, rs);
  m.first.reserve(static_cast<size_t>(m.dom.q));
  for (int x = 0; x < m.dom.q; ++x) {
    if (x < p.q) {
      m.first.push_back(x);  // state of p on both sides
    } else if (x < pr.q) {
      const int k = x - p.q;  // (a, state of r) -> (a, inl state)
      const int a = k / r.q;
      const int y = k % r.q;
      m.first.push_back(p.q + a * rs.q + y);
    } else {
      const int k = x - pr.q;  // ((a, b), state of s) -> (a, (b, state))
      const int ab = k / s.q;
      const int z = k % s.q;
      const int a = ab / r.a;
      const int b = ab % r.a;
      m.first.push_back(p.q + a * rs.q + (r.q + b * s.q + z));
    }
  }
  m.second.reserve(static_cast<size_t>(m.dom.a));
  for (int x = 0; x < m.dom.a; ++x)
    m.second.push_back(x);  // ((a,b),c) and (a,(b,c)) share the radix layout
  return m;
}

// ---------------------------------------------------------- monoid objects ---

MonoidObject action_to_monoid_object(const MonoidAction& ma) {
  if (ma.m_size < 1 || ma.q_size < 0 || ma.unit < 0 || ma.unit >= ma.m_size)
    throw ArityMismatch("action needs a nonempty monoid with a unit in range");
  if (ma.mul.size() !=
          static_cast<size_t>(ma.m_size) * static_cast<size_t>(ma.m_size) ||
      ma.act.size() !=
          static_cast<size_t>(ma.m_size) * static_cast<size_t>(ma.q_size))
    throw ArityMismatch("action tables have the wrong shape");
  for (int v : ma.mul)
    if (v < 0 || v >= ma.m_size)
      throw IndexOutOfRange("multiplication entry outside the monoid");
  for (int v : ma.act)
    if (v < 0 || v >= ma.q_size)
      throw IndexOutOfRange("action entry outside the state set");

  MonoidObject mo;
  mo.carrier = {ma.q_size, ma.m_size};
  mo.unit.dom = {0, 1};
  mo.unit.cod = mo.carrier;
  mo.unit.second = {ma.unit};
  mo.mult.dom = semidirect(mo.carrier, mo.carrier);
  mo.mult.cod = mo.carrier;
  mo.mult.first.reserve(static_cast<size_t>(mo.mult.dom.q));
  for (int x = 0; x < ma.q_size; ++x) mo.mult.first.push_back(x);
  for (int a = 0; a < ma.m_size; ++a)
    for (int y = 0; y < ma.q_size; ++y)
      mo.mult.first.push_back(ma.apply(a, y));
  mo.mult.second = ma.mul;
  return mo;
}

MonoidAction monoid_object_to_action(const MonoidObject& mo) {
  check_pair_map(mo.unit, "monoid object unit");
  check_pair_map(mo.mult, "monoid object multiplication");
  if (!(mo.unit.dom == PointedPair{0, 1}) || !(mo.unit.cod == mo.carrier))
    throw ArityMismatch("monoid object unit must map (0, 1) to the carrier");
  if (!(mo.mult.dom == semidirect(mo.carrier, mo.carrier)) ||
      !(mo.mult.cod == mo.carrier))
    throw ArityMismatch(
        "monoid object multiplication must map carrier x carrier to carrier");
  const int q = mo.carrier.q;
  const int m = mo.carrier.a;
  MonoidAction ma;
  ma.q_size = q;
  ma.m_size = m;
  ma.unit = mo.unit.second.at(0);
  ma.act.reserve(static_cast<size_t>(m) * static_cast<size_t>(q));
  for (int a = 0; a < m; ++a)
    for (int y = 0; y < q; ++y)
      ma.act.push_back(mo.mult.first[static_cast<size_t>(q + a * q + y)]);
  ma.mul = mo.mult.second;
  return ma;
}

namespace {

void compare_maps(const std::string& law, const SetPairMap& got,
                  const SetPairMap& want, std::vector<std::string>& failures,
                  bool& flag) {
  flag = true;
  if (!(got.dom == want.dom) || !(got.cod == want.cod)) {
    flag = false;
    failures.push_back(law + ": maps compare across different objects");
    return;
  }
  for (size_t i = 0; i < got.first.size(); ++i)
    if (got.first[i] != want.first[i]) {
      flag = false;
      failures.push_back(law + ": first component at " + std::to_string(i) +
                         " gives " + std::to_string(got.first[i]) +
                         ", expected " + std::to_string(want.first[i]));
    }
  for (size_t i = 0; i < got.second.size(); ++i)
    if (got.second[i] != want.second[i]) {
      flag = false;
      failures.push_back(law + ": second component at " + std::to_string(i) +
                         " gives " + std::to_string(got.second[i]) +
                         ", expected " + std::to_string(want.second[i]));
    }
}

}  // namespace

MonoidObjectLaws monoid_object_laws(const MonoidObject& mo) {
  check_pair_map(mo.unit, "monoid object unit");
  check_pair_map(mo.mult, "monoid object multiplication");
  const PointedPair c = mo.carrier;
  MonoidObjectLaws out;

  const SetPairMap id_c = identity_map(c);
  compare_maps("left unit", compose(mo.mult, tensor(mo.unit, id_c)),
               left_unitor(c), out.failures, out.left_unit);
  compare_maps("right unit", compose(mo.mult, tensor(id_c, mo.unit)),
               right_unitor(c), out.failures, out.right_unit);
  const SetPairMap lhs = compose(mo.mult, tensor(mo.mult, id_c));
  const SetPairMap rhs = compose(
      mo.mult, compose(tensor(id_c, mo.mult), associator(c, c, c)));
  compare_maps("associativity", lhs, rhs, out.failures, out.assoc);
  return out;
}

ActionRoundtrip action_roundtrip(const MonoidAction& ma) {
  const auto violations = ma.violations();
  if (!violations.empty())
    throw ActionLawViolation(violations.front().first,
                             violations.front().second);

  ActionRoundtrip out;
  const MonoidObject mo = action_to_monoid_object(ma);
  out.laws = monoid_object_laws(mo);

  out.states_fixed = true;
  for (int x = 0; x < ma.q_size; ++x)
    if (mo.mult.first[static_cast<size_t>(x)] != x) out.states_fixed = false;

  const MonoidAction rec = monoid_object_to_action(mo);
  out.tables_match = rec.m_size == ma.m_size && rec.q_size == ma.q_size &&
                     rec.unit == ma.unit && rec.mul == ma.mul &&
                     rec.act == ma.act;

  out.clone_laws = check_clone_laws(make_action_clone(ma));
  out.pass = out.laws.pass() && out.states_fixed && out.tables_match &&
             out.clone_laws.pass;

  out.notes.push_back(
      "diagrams checked elementwise on the tensor of (" +
      std::to_string(ma.q_size) + ", " + std::to_string(ma.m_size) +
      ") with itself");
  for (const auto& note : out.clone_laws.notes) out.notes.push_back(note);
  return out;
}

}  // namespace proftree
