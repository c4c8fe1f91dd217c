#ifndef STIRVAL_H
#define STIRVAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STIRVAL_API __declspec(dllexport)
#else
#define STIRVAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status; on failure stirval_last_error() describes it. */
typedef enum stirval_status {
    STIRVAL_OK = 0,
    STIRVAL_ERR_ARGUMENT = 1,     /* outside the operation's domain, bad JSON, null pointer */
    STIRVAL_ERR_SIZE = 2,         /* input above an exact-arithmetic cap */
    STIRVAL_ERR_PRECISION = 3,    /* modular precision budget exhausted */
    STIRVAL_ERR_DISCREPANCY = 4,  /* two engines disagree */
    STIRVAL_ERR_UNKNOWN_CHECK = 5,
    STIRVAL_ERR_INTERNAL = 6
} stirval_status;

typedef enum stirval_method {
    STIRVAL_METHOD_EXACT = 0,
    STIRVAL_METHOD_STIRLING = 1,
    STIRVAL_METHOD_EXPANSION = 2,
    STIRVAL_METHOD_BOTH = 3
} stirval_method;

typedef enum stirval_engine {
    STIRVAL_ENGINE_STIRLING = 0,
    STIRVAL_ENGINE_EXPANSION = 1,
    STIRVAL_ENGINE_BOTH = 2
} stirval_engine;

typedef struct stirval_valuation {
    int is_infinite;
    /* Set by the expansion method when only a lower bound is known. */
    int is_lower_bound;
    int64_t value;
} stirval_valuation;

typedef struct stirval_build_options {
    size_t max_depth;
    stirval_engine engine;
    unsigned workers;
} stirval_build_options;

typedef struct stirval_tree stirval_tree;

STIRVAL_API const char* stirval_version(void);
/* Message of the last failure on the calling thread; empty if none. */
STIRVAL_API const char* stirval_last_error(void);
/* Frees strings returned through char** out-parameters. */
STIRVAL_API void stirval_string_free(char* s);

/* nu_p(H(n, k)). */
STIRVAL_API stirval_status stirval_valuation_H(uint64_t p, uint64_t n, uint64_t k, stirval_method method,
                                               stirval_valuation* out);

/* Starting guard digits the Stirling engine uses for (n, k, p) under the default policy. */
STIRVAL_API stirval_status stirval_starting_guard(uint64_t p, uint64_t n, uint64_t k, uint64_t* out);

/* Defaults: max_depth 32, both engines, one worker. */
STIRVAL_API void stirval_build_options_init(stirval_build_options* options);
STIRVAL_API stirval_status stirval_tree_build(uint64_t p, uint64_t k, const stirval_build_options* options,
                                              stirval_tree** out);
STIRVAL_API void stirval_tree_free(stirval_tree* tree);
STIRVAL_API stirval_status stirval_tree_counts(const stirval_tree* tree, size_t* nodes, size_t* leaves,
                                               size_t* levels, int* complete);
/* Smallest and largest child count over determined nodes; both -1 when there are none. */
STIRVAL_API stirval_status stirval_tree_child_range(const stirval_tree* tree, int64_t* min_children,
                                                    int64_t* max_children);
/* TreeDocument JSON; timestamp may be NULL. */
STIRVAL_API stirval_status stirval_tree_json(const stirval_tree* tree, const char* timestamp, char** out);
STIRVAL_API stirval_status stirval_tree_dot(const stirval_tree* tree, char** out);

/* Bits f_0..f_terms as a string of '0' and '1'. */
STIRVAL_API stirval_status stirval_fseq(size_t terms, char** out);

/* JSON array of the check names accepted by stirval_verify. */
STIRVAL_API stirval_status stirval_check_names(char** out);
/* Runs a named check. params_json may be NULL; seed may be NULL for deterministic
 * checks. *passed is 1 unless the verdict is fail. */
STIRVAL_API stirval_status stirval_verify(const char* name, const char* params_json, const uint64_t* seed,
                                          char** report_json, int* passed);

/* JSON array of [n, k] pairs with H(n, k) an integer, 1 <= k <= n <= n_max. */
STIRVAL_API stirval_status stirval_scan(uint64_t n_max, char** out);

#ifdef __cplusplus
}
#endif

#endif
