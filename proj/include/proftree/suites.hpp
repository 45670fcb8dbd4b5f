#pragma once

// The check suites behind `check all` and the acceptance gate.  Each suite
// builds its own fixed corpus (alphabets, rosters, bounds chosen for desk
// scale), runs the corresponding library checks, and returns one Report.
// Configuration covers the seed for sampled tuple spaces, the enumeration
// guard, an optional corpus-size override, whether the mutation corpora run,
// and how many suites may run concurrently; none of it changes what counts
// as a pass.

#include <cstdint>
#include <string>
#include <vector>

#include "proftree/report.hpp"

namespace proftree {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::uint64_t guard = 65536;
  // 0 keeps each check's own corpus bound; a positive value replaces the
  // main tree-size bounds (for quick smoke runs, not for acceptance).
  int bound = 0;
  bool mutation_corpus = true;
  int jobs = 1;  // suites run concurrently when > 1; output is unaffected
};

struct RunPlan {
  SuiteConfig config;
  std::vector<std::string> suites;
};

// JSON object with optional keys: seed, guard, bound, mutation_corpus,
// jobs, suites (list of suite or group names).  Unknown keys, wrong types,
// and unknown suite names raise ConfigError naming the offender.
RunPlan load_config(const std::string& path);
RunPlan default_plan();

// Canonical order: clone-laws, church-roundtrip, fundamental-lemma,
// naturality, iso-roundtrip, fixed-point, parametricity, signatures.
const std::vector<std::string>& all_suites();

// Accepts a suite name verbatim, or one of the groups all / clone-laws /
// church / semantics / profinite / signatures; ConfigError otherwise.
std::vector<std::string> expand_group(const std::string& name);

Report run_suite(const std::string& suite, const SuiteConfig& cfg);
// In the order given, regardless of cfg.jobs.
std::vector<Report> run_suites(const std::vector<std::string>& suites,
                               const SuiteConfig& cfg);

}  // namespace proftree
