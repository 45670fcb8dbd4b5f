#ifndef PROFTREE_H
#define PROFTREE_H

/* C interface to the proftree shared library.
 *
 * Every function returns a pft_status; outputs come back through pointer
 * parameters.  All returned strings are heap-allocated and must be released
 * with pft_string_free.  On any non-OK status, pft_last_error() holds a
 * human-readable message for the current thread until the next library call
 * on that thread.  Handles are not thread-safe; strings and status codes
 * are plain data.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pft_status {
  PFT_OK = 0,
  PFT_E_PARSE = 1,       /* malformed tree / term / alphabet text */
  PFT_E_TYPE = 2,        /* term exists but is ill-typed */
  PFT_E_SCOPE = 3,       /* unbound variable */
  PFT_E_ARITY = 4,       /* letter or operation applied at the wrong arity */
  PFT_E_INDEX = 5,       /* letter / variable / projection out of range */
  PFT_E_GUARD = 6,       /* an enumeration exceeded the configured guard */
  PFT_E_ACTION_LAW = 7,  /* monoid-action tables violate a law */
  PFT_E_NOT_CHURCH = 8,  /* term does not have the expected encoding type */
  PFT_E_ROSTER = 9,      /* roster lacks a member an operation requires */
  PFT_E_CONFIG = 10,     /* bad configuration file, key, or roster spec */
  PFT_E_UNSUPPORTED = 11,
  PFT_E_INVALID_ARGUMENT = 12, /* null pointer or unknown verb / key */
  PFT_E_INTERNAL = 13
} pft_status;

/* Stable lowercase name for a status code ("ok", "parse", ...). */
const char* pft_status_name(pft_status s);

/* Message for the most recent failing call on this thread; never NULL.
 * The pointer is invalidated by the next library call on the same thread. */
const char* pft_last_error(void);

/* Releases any string returned through a char** output.  NULL is a no-op. */
void pft_string_free(char* s);

const char* pft_version(void);

/* ----------------------------------------------------------- check runs --- */

/* A check configuration: shared settings (seed, guard, corpus bound,
 * mutation corpora, job count) plus the list of suites to run. */
typedef struct pft_config pft_config;

/* Fresh configuration with default settings and every suite selected. */
pft_config* pft_config_new(void);
void pft_config_free(pft_config* cfg);

/* Replaces the configuration with the contents of a JSON file.  Optional
 * keys: seed, guard, bound, mutation_corpus, jobs, suites.  Unknown keys or
 * wrong types give PFT_E_CONFIG naming the offender. */
pft_status pft_config_load(pft_config* cfg, const char* path);

/* Keys: "seed", "guard" (full 64-bit range), "bound" (>= 0), "jobs" (>= 1),
 * "mutation-corpus" (0 or 1). */
pft_status pft_config_set(pft_config* cfg, const char* key, uint64_t value);

/* Replaces the suite selection with the expansion of a suite or group name:
 * all, clone-laws, church, semantics, profinite, signatures, or any single
 * suite name. */
pft_status pft_config_select(pft_config* cfg, const char* group);

/* Runs the selected suites.  text_out receives the human-readable report
 * (with timings), json_out the machine-readable one (timing-free, sorted,
 * byte-identical for identical configurations).  Either output may be NULL
 * to skip it.  *pass_out (if non-NULL) is 1 when no suite failed. */
pft_status pft_check_run(const pft_config* cfg, char** text_out,
                         char** json_out, int* pass_out);

/* -------------------------------------------------------------- encoding --- */

/* alphabet is a bracketed arity list such as "[0, 1]"; trees are written
 * "(a2 (a1) x1)" with bare leaves; terms use the library's lambda syntax.
 * vars bounds the variables a tree may mention (x1..xvars). */
pft_status pft_church_encode(const char* alphabet, int vars, const char* tree,
                             char** term_out);
pft_status pft_church_decode(const char* alphabet, int vars, const char* term,
                             char** tree_out);

/* ----------------------------------------------- families and approximants --- */

/* One entry point per invocation, multiplexed on verb:
 *
 *   family-of-tree     tables of the tree's family at every roster member
 *   check-natural      naturality squares for the family (seams fail here)
 *   search-def         least tree defining the family, up to a size bound
 *   restrict           the family's tables at the endofunction members
 *   lift               family re-grown from a tree's finite approximants
 *   check-parametric   relational invariance of the tree's approximants
 *   check-fixed-point  one-step unfolding identity at base size q
 *
 * Arguments (unused ones may be NULL / 0):
 *   alphabet  required for every verb
 *   vars      variable bound; check-fixed-point requires 0
 *   trees     one tree, or (family verbs only) one per roster member
 *             separated by ';' to build a deliberately seamed family
 *   roster    NULL or "standard", "bidef", or a comma list of
 *             endo:<q>, act:z2, act:trivial:<q>, product:<i>:<j>,
 *             carrier:<i>:<m>, delta:<q>  (i, j, m 0-based member indices)
 *   bases     comma list of base sizes, e.g. "2,3" (lift, check-parametric)
 *   q         base size for check-fixed-point
 *   bound     size bound for search-def
 *   guard     enumeration guard; 0 keeps the library default
 *
 * json_out receives the verb's result as JSON.  *pass_out is 1 unless the
 * verb's check failed or (search-def) no tree was found within the bound. */
pft_status pft_profinite_run(const char* verb, const char* alphabet, int vars,
                             const char* trees, const char* roster,
                             const char* bases, int q, int bound,
                             uint64_t guard, char** json_out, int* pass_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROFTREE_H */
