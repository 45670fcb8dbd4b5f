// C surface of the shared library.  Thin argument parsing and rendering on
// top of the C++ modules: every entry point catches the library's exception
// hierarchy, stashes the message in a thread-local slot, and maps the stable
// code string to a pft_status.  Strings handed out are malloc'd so that the
// C side can free them without knowing about the C++ runtime.

#include "proftree.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "proftree/church.hpp"
#include "proftree/clone.hpp"
#include "proftree/errors.hpp"
#include "proftree/profinite.hpp"
#include "proftree/report.hpp"
#include "proftree/sem.hpp"
#include "proftree/stlc.hpp"
#include "proftree/suites.hpp"
#include "proftree/tree.hpp"

using nlohmann::json;

struct pft_config {
  proftree::RunPlan plan;
};

namespace {

thread_local std::string tls_error;

pft_status status_of(const proftree::Error& e) {
  const std::string& c = e.code();
  if (c == "parse") return PFT_E_PARSE;
  if (c == "type") return PFT_E_TYPE;
  if (c == "scope") return PFT_E_SCOPE;
  if (c == "arity") return PFT_E_ARITY;
  if (c == "index") return PFT_E_INDEX;
  if (c == "guard") return PFT_E_GUARD;
  if (c == "action-law") return PFT_E_ACTION_LAW;
  if (c == "not-church") return PFT_E_NOT_CHURCH;
  if (c == "roster") return PFT_E_ROSTER;
  if (c == "config") return PFT_E_CONFIG;
  if (c == "unsupported") return PFT_E_UNSUPPORTED;
  return PFT_E_INTERNAL;
}

// Runs the body, routing exceptions into tls_error + status.
template <typename F>
pft_status guarded(F&& body) {
  try {
    body();
    tls_error.clear();
    return PFT_OK;
  } catch (const proftree::Error& e) {
    tls_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    tls_error = e.what();
    return PFT_E_INTERNAL;
  }
}

pft_status invalid(const std::string& msg) {
  tls_error = msg;
  return PFT_E_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  for (auto& p : parts) {
    while (!p.empty() && (p.front() == ' ' || p.front() == '\t')) p.erase(p.begin());
    while (!p.empty() && (p.back() == ' ' || p.back() == '\t')) p.pop_back();
  }
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw proftree::ConfigError(what + ": expected an integer, got '" + text + "'");
  }
}

// ---------------------------------------------------------------- rosters ---

// "standard", "bidef", or a comma list of member tokens; see proftree.h.
std::shared_ptr<const proftree::CloneRoster> parse_roster(const char* spec,
                                                          std::uint64_t guard) {
  using proftree::CloneRoster;
  using proftree::ConfigError;
  std::string text = spec == nullptr ? "standard" : spec;
  if (text.empty() || text == "standard")
    return std::make_shared<const CloneRoster>(CloneRoster::standard(guard));
  auto roster = std::make_shared<CloneRoster>();
  if (text == "bidef") {
    roster->add_endo(2, guard);
    roster->add_endo(3, guard);
    roster->add_action("act-z2", proftree::MonoidAction::z2_flip(), guard);
    return roster;
  }
  for (const std::string& tok : split(text, ',')) {
    std::vector<std::string> f = split(tok, ':');
    auto member_index = [&](const std::string& t) {
      int i = parse_int(t, "roster member '" + tok + "'");
      if (i < 0 || i >= roster->size())
        throw ConfigError("roster member '" + tok + "': index " +
                          std::to_string(i) + " refers past the " +
                          std::to_string(roster->size()) +
                          " members declared so far");
      return i;
    };
    if (f.size() == 2 && f[0] == "endo") {
      int q = parse_int(f[1], "roster member '" + tok + "'");
      if (q < 1) throw ConfigError("roster member '" + tok + "': base size must be >= 1");
      roster->add_endo(q, guard);
    } else if (f.size() == 2 && f[0] == "act" && f[1] == "z2") {
      roster->add_action("act-z2", proftree::MonoidAction::z2_flip(), guard);
    } else if (f.size() == 3 && f[0] == "act" && f[1] == "trivial") {
      int q = parse_int(f[2], "roster member '" + tok + "'");
      if (q < 1) throw ConfigError("roster member '" + tok + "': base size must be >= 1");
      roster->add_action("act-trivial-" + std::to_string(q),
                         proftree::MonoidAction::trivial(q), guard);
    } else if (f.size() == 3 && f[0] == "product") {
      roster->add_product(member_index(f[1]), member_index(f[2]), guard);
    } else if (f.size() == 3 && f[0] == "carrier") {
      int parent = member_index(f[1]);
      int m = parse_int(f[2], "roster member '" + tok + "'");
      if (m < 0) throw ConfigError("roster member '" + tok + "': arity must be >= 0");
      roster->add_endo_carrier(parent, m, guard);
    } else if (f.size() == 2 && f[0] == "delta") {
      int q = parse_int(f[1], "roster member '" + tok + "'");
      if (q < 1) throw ConfigError("roster member '" + tok + "': base size must be >= 1");
      roster->add_delta_pair(q, guard);
    } else {
      throw ConfigError(
          "roster member '" + tok +
          "': expected endo:<q>, act:z2, act:trivial:<q>, product:<i>:<j>, "
          "carrier:<i>:<m>, or delta:<q>");
    }
  }
  return roster;
}

std::vector<int> parse_bases(const char* spec, const std::string& verb) {
  if (spec == nullptr || *spec == '\0')
    throw proftree::ConfigError(verb + " requires a comma list of base sizes");
  std::vector<int> bases;
  for (const std::string& tok : split(spec, ',')) {
    int q = parse_int(tok, "base size");
    if (q < 1) throw proftree::ConfigError("base size must be >= 1, got " + tok);
    bases.push_back(q);
  }
  return bases;
}

std::vector<proftree::Tree> parse_trees(const proftree::RankedAlphabet& sigma,
                                        int vars, const char* text) {
  if (text == nullptr || *text == '\0')
    throw proftree::ConfigError("a tree argument is required");
  std::vector<proftree::Tree> trees;
  for (const std::string& tok : split(text, ';'))
    trees.push_back(proftree::parse_tree(sigma, vars, tok));
  return trees;
}

// --------------------------------------------------------- verb rendering ---

json family_json(const proftree::NaturalFamily& fam) {
  json members = json::array();
  for (size_t i = 0; i < fam.roster->members.size(); ++i) {
    const auto& mem = fam.roster->members[i];
    json entries = json::array();
    for (const auto& elem : fam.tables[i])
      entries.push_back(mem.clone->show(fam.n, elem));
    members.push_back({{"name", mem.name},
                       {"assignments", fam.tables[i].size()},
                       {"entries", std::move(entries)}});
  }
  return json{{"alphabet", fam.sigma.format()},
              {"vars", fam.n},
              {"members", std::move(members)}};
}

proftree::NaturalFamily build_family(
    const proftree::RankedAlphabet& sigma, int vars,
    const std::vector<proftree::Tree>& trees,
    std::shared_ptr<const proftree::CloneRoster> roster) {
  if (trees.size() == 1)
    return proftree::family_of_tree(sigma, vars, trees[0], roster);
  if (static_cast<int>(trees.size()) != roster->size())
    throw proftree::ConfigError(
        "expected one tree, or one per roster member (" +
        std::to_string(roster->size()) + "), got " +
        std::to_string(trees.size()));
  return proftree::family_from_trees(sigma, vars, trees, roster);
}

json run_profinite_verb(const std::string& verb, const char* alphabet,
                        int vars, const char* trees_text, const char* roster_spec,
                        const char* bases_spec, int q, int bound,
                        std::uint64_t guard, bool& pass) {
  using namespace proftree;
  RankedAlphabet sigma = RankedAlphabet::parse(alphabet);
  pass = true;

  if (verb == "family-of-tree" || verb == "check-natural" ||
      verb == "search-def" || verb == "restrict") {
    auto roster = parse_roster(roster_spec, guard);
    auto trees = parse_trees(sigma, vars, trees_text);
    NaturalFamily fam = build_family(sigma, vars, trees, roster);
    if (verb == "family-of-tree") return family_json(fam);
    if (verb == "check-natural") {
      NaturalityReport rep = naturality_check(fam);
      pass = rep.pass;
      json failures = json::array();
      for (const auto& f : rep.failures)
        failures.push_back(
            {{"edge", f.edge}, {"morphism", f.morphism}, {"detail", f.detail}});
      return json{{"pass", rep.pass},
                  {"squares-checked", rep.squares_checked},
                  {"failures", std::move(failures)}};
    }
    if (verb == "search-def") {
      if (bound < 1) throw ConfigError("search-def requires a size bound >= 1");
      std::optional<Tree> found = definability_search(fam, bound);
      pass = found.has_value();
      json out{{"size-bound", bound}};
      out["found"] = found ? json(format_tree(*found)) : json(nullptr);
      return out;
    }
    // restrict: render each endo component as its table over assignments.
    ProfiniteTermApprox theta = restrict_family(fam);
    json comps = json::array();
    for (size_t k = 0; k < theta.base_sizes.size(); ++k) {
      int base = theta.base_sizes[k];
      auto assignments = enumerate_morphisms(sigma, make_endo_clone(base, guard));
      json rows = json::array();
      for (const auto& p : assignments) {
        SemValue letters = morphism_to_semantics(p, base);
        rows.push_back(
            table_of_sem(base, vars, theta.components[k].apply(letters), guard));
      }
      comps.push_back({{"base", base}, {"tables", std::move(rows)}});
    }
    return json{{"alphabet", sigma.format()},
                {"vars", vars},
                {"components", std::move(comps)}};
  }

  if (verb == "lift") {
    auto roster = parse_roster(roster_spec, guard);
    auto trees = parse_trees(sigma, vars, trees_text);
    if (trees.size() != 1) throw ConfigError("lift takes exactly one tree");
    auto bases = parse_bases(bases_spec, verb);
    ProfiniteTermApprox theta = approx_from_tree(sigma, vars, trees[0], bases);
    NaturalFamily lifted = lift(theta, roster, guard);
    NaturalFamily direct = family_of_tree(sigma, vars, trees[0], roster);
    bool matches = families_equal(lifted, direct);
    pass = matches;
    json out = family_json(lifted);
    out["matches-direct"] = matches;
    return out;
  }

  if (verb == "check-parametric") {
    auto trees = parse_trees(sigma, vars, trees_text);
    if (trees.size() != 1) throw ConfigError("check-parametric takes exactly one tree");
    auto bases = parse_bases(bases_spec, verb);
    ParametricFamily rho = parametric_from_tree(sigma, vars, trees[0], bases);
    ParametricityReport rep = parametricity_check(rho, 5, guard);
    pass = rep.pass;
    json failures = json::array();
    for (const auto& f : rep.failures)
      failures.push_back({{"left-base", f.left_base},
                          {"right-base", f.right_base},
                          {"relation", f.relation}});
    return json{{"pass", rep.pass},
                {"relations-checked", rep.relations_checked},
                {"failures", std::move(failures)}};
  }

  if (verb == "check-fixed-point") {
    if (vars != 0)
      throw ConfigError("check-fixed-point applies to variable-free trees (vars = 0)");
    if (q < 1) throw ConfigError("check-fixed-point requires a base size q >= 1");
    auto trees = parse_trees(sigma, vars, trees_text);
    if (trees.size() != 1) throw ConfigError("check-fixed-point takes exactly one tree");
    ParametricFamily rho = parametric_from_tree(sigma, 0, trees[0], {q});
    FixedPointReport rep = fixed_point_check(rho, sigma, q, guard);
    pass = rep.pass;
    return json{{"pass", rep.pass},
                {"q", rep.q},
                {"expansion-size", rep.expansion_size},
                {"witness", rep.witness}};
  }

  throw ConfigError(
      "unknown verb '" + verb +
      "': expected family-of-tree, check-natural, search-def, restrict, "
      "lift, check-parametric, or check-fixed-point");
}

}  // namespace

// ------------------------------------------------------------ entry points ---

extern "C" {

const char* pft_status_name(pft_status s) {
  switch (s) {
    case PFT_OK: return "ok";
    case PFT_E_PARSE: return "parse";
    case PFT_E_TYPE: return "type";
    case PFT_E_SCOPE: return "scope";
    case PFT_E_ARITY: return "arity";
    case PFT_E_INDEX: return "index";
    case PFT_E_GUARD: return "guard";
    case PFT_E_ACTION_LAW: return "action-law";
    case PFT_E_NOT_CHURCH: return "not-church";
    case PFT_E_ROSTER: return "roster";
    case PFT_E_CONFIG: return "config";
    case PFT_E_UNSUPPORTED: return "unsupported";
    case PFT_E_INVALID_ARGUMENT: return "invalid-argument";
    case PFT_E_INTERNAL: return "internal";
  }
  return "internal";
}

const char* pft_last_error(void) { return tls_error.c_str(); }

void pft_string_free(char* s) { std::free(s); }

const char* pft_version(void) { return "1.0.0"; }

pft_config* pft_config_new(void) {
  try {
    auto* cfg = new pft_config{proftree::default_plan()};
    tls_error.clear();
    return cfg;
  } catch (const std::exception& e) {
    tls_error = e.what();
    return nullptr;
  }
}

void pft_config_free(pft_config* cfg) { delete cfg; }

pft_status pft_config_load(pft_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr)
    return invalid("pft_config_load: cfg and path must be non-null");
  return guarded([&] { cfg->plan = proftree::load_config(path); });
}

pft_status pft_config_set(pft_config* cfg, const char* key, uint64_t value) {
  if (cfg == nullptr || key == nullptr)
    return invalid("pft_config_set: cfg and key must be non-null");
  tls_error.clear();
  std::string k = key;
  if (k == "seed") {
    cfg->plan.config.seed = value;
    return PFT_OK;
  }
  if (k == "guard") {
    cfg->plan.config.guard = value;
    return PFT_OK;
  }
  if (k == "bound") {
    if (value > 1000000) return invalid("pft_config_set: bound out of range");
    cfg->plan.config.bound = static_cast<int>(value);
    return PFT_OK;
  }
  if (k == "jobs") {
    if (value < 1 || value > 1024) return invalid("pft_config_set: jobs must be in 1..1024");
    cfg->plan.config.jobs = static_cast<int>(value);
    return PFT_OK;
  }
  if (k == "mutation-corpus") {
    if (value > 1) return invalid("pft_config_set: mutation-corpus takes 0 or 1");
    cfg->plan.config.mutation_corpus = value == 1;
    return PFT_OK;
  }
  return invalid("pft_config_set: unknown key '" + k +
                 "' (expected seed, guard, bound, jobs, mutation-corpus)");
}

pft_status pft_config_select(pft_config* cfg, const char* group) {
  if (cfg == nullptr || group == nullptr)
    return invalid("pft_config_select: cfg and group must be non-null");
  return guarded([&] { cfg->plan.suites = proftree::expand_group(group); });
}

pft_status pft_check_run(const pft_config* cfg, char** text_out,
                         char** json_out, int* pass_out) {
  if (cfg == nullptr) return invalid("pft_check_run: cfg must be non-null");
  return guarded([&] {
    std::vector<proftree::Report> reports =
        proftree::run_suites(cfg->plan.suites, cfg->plan.config);
    bool pass = true;
    for (const auto& r : reports) pass = pass && r.pass();
    if (text_out != nullptr) *text_out = dup_string(proftree::report_text(reports));
    if (json_out != nullptr) *json_out = dup_string(proftree::report_json(reports));
    if (pass_out != nullptr) *pass_out = pass ? 1 : 0;
  });
}

pft_status pft_church_encode(const char* alphabet, int vars, const char* tree,
                             char** term_out) {
  if (alphabet == nullptr || tree == nullptr || term_out == nullptr)
    return invalid("pft_church_encode: alphabet, tree, and term_out must be non-null");
  return guarded([&] {
    auto sigma = proftree::RankedAlphabet::parse(alphabet);
    auto cc = proftree::ChurchContext::make(sigma, vars);
    auto t = proftree::parse_tree(sigma, vars, tree);
    *term_out = dup_string(proftree::format_term(proftree::encode(cc, t)));
  });
}

pft_status pft_church_decode(const char* alphabet, int vars, const char* term,
                             char** tree_out) {
  if (alphabet == nullptr || term == nullptr || tree_out == nullptr)
    return invalid("pft_church_decode: alphabet, term, and tree_out must be non-null");
  return guarded([&] {
    auto sigma = proftree::RankedAlphabet::parse(alphabet);
    auto cc = proftree::ChurchContext::make(sigma, vars);
    auto m = proftree::parse_term(term);
    *tree_out = dup_string(proftree::format_tree(proftree::decode(cc, m)));
  });
}

pft_status pft_profinite_run(const char* verb, const char* alphabet, int vars,
                             const char* trees, const char* roster,
                             const char* bases, int q, int bound,
                             uint64_t guard, char** json_out, int* pass_out) {
  if (verb == nullptr || alphabet == nullptr)
    return invalid("pft_profinite_run: verb and alphabet must be non-null");
  if (vars < 0) return invalid("pft_profinite_run: vars must be >= 0");
  return guarded([&] {
    bool pass = true;
    std::uint64_t g = guard == 0 ? proftree::kDefaultGuard : guard;
    json out = run_profinite_verb(verb, alphabet, vars, trees, roster, bases,
                                  q, bound, g, pass);
    if (json_out != nullptr) *json_out = dup_string(out.dump(2) + "\n");
    if (pass_out != nullptr) *pass_out = pass ? 1 : 0;
  });
}

}  // extern "C"
