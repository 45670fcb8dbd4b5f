// Command-line front end.  Everything goes through the C API in proftree.h;
// this file only parses arguments, forwards them, and renders results.
//
//   proftree check [group] [--config f] [--seed n] [--guard n] [--out f] ...
//   proftree church encode|decode ...
//   proftree profinite <verb> ...
//
// Exit status: 0 when the requested check passed (or a conversion
// succeeded), 1 when it ran but failed, 2 on usage, configuration, or
// library errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proftree.h"

namespace {

// Prints the library's error message and returns the usage/config exit code.
int report_error(pft_status st) {
  std::cerr << "error (" << pft_status_name(st) << "): " << pft_last_error()
            << "\n";
  return 2;
}

bool write_file(const std::string& path, const char* contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << contents;
  return bool(out);
}

struct CheckArgs {
  std::string group = "all";
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::uint64_t guard = 0;
  std::uint64_t bound = 0;
  std::uint64_t jobs = 0;
  bool mutations = true;
  CLI::App* cmd = nullptr;
  CLI::Option *group_opt = nullptr, *seed_opt = nullptr, *guard_opt = nullptr,
              *bound_opt = nullptr, *jobs_opt = nullptr, *mut_opt = nullptr;
};

int run_check(const CheckArgs& a) {
  pft_config* cfg = pft_config_new();
  if (cfg == nullptr) return report_error(PFT_E_INTERNAL);

  pft_status st = PFT_OK;
  auto set_if = [&](CLI::Option* opt, const char* key, std::uint64_t value) {
    if (st == PFT_OK && opt->count() > 0) st = pft_config_set(cfg, key, value);
  };

  if (!a.config_path.empty()) st = pft_config_load(cfg, a.config_path.c_str());
  set_if(a.seed_opt, "seed", a.seed);
  set_if(a.guard_opt, "guard", a.guard);
  set_if(a.bound_opt, "bound", a.bound);
  set_if(a.jobs_opt, "jobs", a.jobs);
  set_if(a.mut_opt, "mutation-corpus", a.mutations ? 1 : 0);
  // The group argument replaces any suite list from the config file, but
  // only when given explicitly.
  if (st == PFT_OK && (a.group_opt->count() > 0 || a.config_path.empty()))
    st = pft_config_select(cfg, a.group.c_str());

  char* text = nullptr;
  char* json = nullptr;
  int pass = 0;
  if (st == PFT_OK)
    st = pft_check_run(cfg, &text, a.out_path.empty() ? nullptr : &json, &pass);
  pft_config_free(cfg);
  if (st != PFT_OK) return report_error(st);

  std::cout << text;
  pft_string_free(text);
  if (!a.out_path.empty()) {
    bool ok = write_file(a.out_path, json);
    pft_string_free(json);
    if (!ok) {
      std::cerr << "error: cannot write '" << a.out_path << "'\n";
      return 2;
    }
  }
  return pass == 1 ? 0 : 1;
}

struct ProfArgs {
  std::string verb;
  std::string alphabet;
  int vars = 0;
  std::vector<std::string> trees;
  std::string roster = "standard";
  std::string bases;
  int q = 0;
  int bound = 0;
  std::uint64_t guard = 0;
  std::string out_path;
};

int run_profinite(const ProfArgs& a) {
  std::string trees;
  for (size_t i = 0; i < a.trees.size(); ++i) {
    if (i > 0) trees += ';';
    trees += a.trees[i];
  }
  char* json = nullptr;
  int pass = 0;
  pft_status st = pft_profinite_run(
      a.verb.c_str(), a.alphabet.c_str(), a.vars, trees.c_str(),
      a.roster.c_str(), a.bases.empty() ? nullptr : a.bases.c_str(), a.q,
      a.bound, a.guard, &json, &pass);
  if (st != PFT_OK) return report_error(st);

  if (a.out_path.empty()) {
    std::cout << json;
  } else if (!write_file(a.out_path, json)) {
    pft_string_free(json);
    std::cerr << "error: cannot write '" << a.out_path << "'\n";
    return 2;
  } else {
    std::cout << a.verb << ": " << (pass == 1 ? "pass" : "fail") << ", wrote "
              << a.out_path << "\n";
  }
  pft_string_free(json);
  return pass == 1 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clones of ranked trees: check suites, tree encodings, and "
               "profinite-tree verdicts over finite rosters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pft_version());

  // ---- check ----
  CheckArgs ck;
  ck.cmd = app.add_subcommand(
      "check", "Run check suites and print the report (exit 0 iff pass)");
  ck.group_opt = ck.cmd->add_option(
      "group", ck.group,
      "all, clone-laws, church, semantics, profinite, signatures, or a "
      "single suite name");
  ck.cmd->add_option("--config", ck.config_path,
                     "JSON config file (seed, guard, bound, mutation_corpus, "
                     "jobs, suites)");
  ck.seed_opt = ck.cmd->add_option("--seed", ck.seed, "seed for sampled tuple spaces");
  ck.guard_opt = ck.cmd->add_option("--guard", ck.guard, "enumeration guard");
  ck.bound_opt = ck.cmd->add_option("--bound", ck.bound,
                                    "override corpus tree-size bounds (smoke runs)");
  ck.jobs_opt = ck.cmd->add_option("--jobs", ck.jobs, "suites to run concurrently");
  ck.mut_opt = ck.cmd->add_flag("--mutations,!--no-mutations", ck.mutations,
                                "run the mutation corpora (default on)");
  ck.cmd->add_option("--out", ck.out_path,
                     "write the machine-readable report to this file");

  // ---- church ----
  auto* church = app.add_subcommand("church", "Tree <-> term conversions");
  church->require_subcommand(1);
  std::string alphabet, tree_text, term_text;
  int vars = 0;
  auto* enc = church->add_subcommand("encode", "tree to closed term");
  enc->add_option("--alphabet", alphabet, "arity list, e.g. \"[0, 1]\"")->required();
  enc->add_option("--vars", vars, "variable bound (x1..xn)");
  enc->add_option("--tree", tree_text, "tree, e.g. \"(a2 (a2 a1))\"")->required();
  auto* dec = church->add_subcommand("decode", "closed term back to a tree");
  dec->add_option("--alphabet", alphabet, "arity list, e.g. \"[0, 1]\"")->required();
  dec->add_option("--vars", vars, "variable bound (x1..xn)");
  dec->add_option("--term", term_text, "term in lambda syntax")->required();

  // ---- profinite ----
  auto* prof = app.add_subcommand(
      "profinite", "Families over clone rosters and their checks");
  prof->require_subcommand(1);
  ProfArgs pf;
  struct VerbSpec {
    const char* name;
    const char* help;
  };
  const VerbSpec verbs[] = {
      {"family-of-tree", "tables of a tree's family at every roster member"},
      {"check-natural", "naturality squares for a family (exit 1 on a seam)"},
      {"search-def", "least tree defining the family within --bound"},
      {"restrict", "the family's tables at the endofunction members"},
      {"lift", "re-grow the family from finite approximants at --bases"},
      {"check-parametric", "relational invariance at --bases"},
      {"check-fixed-point", "one-step unfolding identity at --q"},
  };
  std::vector<CLI::App*> verb_cmds;
  for (const auto& v : verbs) {
    CLI::App* sub = prof->add_subcommand(v.name, v.help);
    sub->add_option("--alphabet", pf.alphabet, "arity list, e.g. \"[0, 1]\"")
        ->required();
    sub->add_option("--vars", pf.vars, "variable bound (x1..xn)");
    sub->add_option("--tree", pf.trees,
                    "tree; repeat for one per roster member (family verbs)")
        ->required();
    sub->add_option("--roster", pf.roster,
                    "standard, bidef, or endo:<q>,act:z2,act:trivial:<q>,"
                    "product:<i>:<j>,carrier:<i>:<m>,delta:<q>");
    sub->add_option("--bases", pf.bases, "comma list of base sizes, e.g. 2,3");
    sub->add_option("--q", pf.q, "base size for check-fixed-point");
    sub->add_option("--bound", pf.bound, "size bound for search-def");
    sub->add_option("--guard", pf.guard, "enumeration guard (0 = default)");
    sub->add_option("--out", pf.out_path, "write the JSON result to this file");
    verb_cmds.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, usage errors as 2
  }

  if (ck.cmd->parsed()) return run_check(ck);

  if (church->parsed()) {
    char* out = nullptr;
    pft_status st =
        enc->parsed()
            ? pft_church_encode(alphabet.c_str(), vars, tree_text.c_str(), &out)
            : pft_church_decode(alphabet.c_str(), vars, term_text.c_str(), &out);
    if (st != PFT_OK) return report_error(st);
    std::cout << out << "\n";
    pft_string_free(out);
    return 0;
  }

  for (size_t i = 0; i < verb_cmds.size(); ++i) {
    if (verb_cmds[i]->parsed()) {
      pf.verb = verbs[i].name;
      return run_profinite(pf);
    }
  }
  return 2;  // unreachable: require_subcommand guarantees one branch
}
