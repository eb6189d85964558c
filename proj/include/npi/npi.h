/*
 * C interface to the npi folding library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an npi_status; on
 * failure npi_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread). Strings returned through char** out
 * parameters are heap allocated and released with npi_string_free.
 */
#ifndef NPI_NPI_H
#define NPI_NPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(NPI_BUILDING_LIBRARY)
#define NPI_API __declspec(dllexport)
#else
#define NPI_API __declspec(dllimport)
#endif
#else
#define NPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum npi_status {
  NPI_OK = 0,
  NPI_ERR_INVALID_ARGUMENT = 1,
  NPI_ERR_PARSE = 2,
  NPI_ERR_UNSUPPORTED_FORMAT = 3,
  NPI_ERR_DANGLING_REFERENCE = 4,
  NPI_ERR_NOT_IMMERSION = 5,
  NPI_ERR_DISCONNECTED = 6,
  NPI_ERR_IO = 7,
  NPI_ERR_INTERNAL = 99
} npi_status;

typedef struct npi_complex npi_complex;
typedef struct npi_map npi_map;
typedef struct npi_search_report npi_search_report;

NPI_API const char* npi_version(void);
NPI_API const char* npi_last_error(void);
NPI_API const char* npi_status_name(npi_status status);
NPI_API void npi_string_free(char* s);

/* ---- complexes ---------------------------------------------------------- */

/* Presentation complex of <a, b | w, b a^n b^-1 a^-(n+1)>. Words use a, b
 * for generators and A, B for inverses. */
NPI_API npi_status npi_complex_miller_schupp(int n, const char* word,
                                             npi_complex** out);
/* Presentation complex on `generators` generators (letters a, b, c, ...). */
NPI_API npi_status npi_complex_presentation(size_t generators,
                                            const char* const* relators,
                                            size_t relator_count,
                                            npi_complex** out);
/* Parses {"vertices": [...], "edges": [...], "faces": [...]}, or takes the
 * "target" complex of a certificate. */
NPI_API npi_status npi_complex_from_json(const char* json, npi_complex** out);
NPI_API npi_status npi_complex_to_json(const npi_complex* c, char** out);
NPI_API void npi_complex_free(npi_complex* c);

typedef struct npi_complex_info {
  size_t vertices;
  size_t edges;
  size_t faces;
  int64_t euler;
  int connected;
  size_t free_edges;
  size_t isolated_edges;
} npi_complex_info;

/* Fails with NPI_ERR_INVALID_ARGUMENT if the complex is invalid. */
NPI_API npi_status npi_complex_describe(const npi_complex* c,
                                        npi_complex_info* out);

/* ---- maps and certificates ---------------------------------------------- */

NPI_API npi_status npi_map_from_document(const char* document, npi_map** out);
NPI_API npi_status npi_map_to_certificate(const npi_map* m, char** out);
NPI_API void npi_map_free(npi_map* m);

/* Describes the map's source complex. */
NPI_API npi_status npi_map_describe(const npi_map* m, npi_complex_info* out);
NPI_API npi_status npi_map_is_immersion(const npi_map* m, int* out);
/* Hex canonical key; the map must be an immersion with connected source. */
NPI_API npi_status npi_map_canonical_key(const npi_map* m, char** out);

typedef struct npi_fold_stats {
  size_t vertex_merges;
  size_t edge_folds;
  size_t face_merges;
} npi_fold_stats;

/* Folds m into an immersion of the quotient into m's target. */
NPI_API npi_status npi_fold(const npi_map* m, npi_map** folded,
                            npi_fold_stats* stats);

/* Y v S^1 -> X v D^2 at the source vertex with the given id (NULL picks the
 * first vertex in id order). */
NPI_API npi_status npi_wnpi_to_npi(const npi_map* m, const char* vertex_id,
                                   npi_map** out);

/* Sets *passed to 1 iff every check passes. *report receives a
 * line-per-check text report. Parse failures are reported, not returned. */
NPI_API npi_status npi_verify(const char* document, int* passed,
                              char** report);

/* ---- words -------------------------------------------------------------- */

NPI_API npi_status npi_normalize_word(const char* word, char** out);
/* Newline-terminated list of enumerated words. */
NPI_API npi_status npi_enumerate_words(size_t max_len, char** out);

/* ---- search ------------------------------------------------------------- */

typedef struct npi_search_config {
  size_t max_depth;       /* default 8 */
  size_t max_nodes;       /* default 1000000; 0 = unlimited */
  double max_seconds;     /* 0 = unlimited */
  int64_t min_euler;      /* hit predicate: euler >= min_euler */
  int require_no_free_edges;
  int stop_on_first;
  size_t workers;         /* >= 1 */
  int deterministic;      /* forces one worker */
} npi_search_config;

NPI_API void npi_search_config_init(npi_search_config* config);

/* Called once per hit with the hit's certificate and index data. */
typedef void (*npi_hit_fn)(void* user, const char* file_name,
                           const char* certificate, size_t depth,
                           int64_t euler);
/* Called after each depth with a key=value progress line. */
typedef void (*npi_progress_fn)(void* user, const char* line);

NPI_API npi_status npi_search(const npi_complex* target,
                              const npi_search_config* config,
                              npi_hit_fn on_hit, npi_progress_fn on_progress,
                              void* user, npi_search_report** out);
/* Requests that running searches stop after the current node. Safe to call
 * from a signal handler. */
NPI_API void npi_search_interrupt(void);
NPI_API void npi_search_clear_interrupt(void);

NPI_API size_t npi_report_hit_count(const npi_search_report* r);
NPI_API size_t npi_report_depth_count(const npi_search_report* r);
/* Nodes and max euler at a depth; fails if depth is out of range. */
NPI_API npi_status npi_report_depth(const npi_search_report* r, size_t depth,
                                    size_t* nodes, int64_t* max_euler,
                                    int* complete);
/* 1 if a node/time budget or an interrupt cut the search short. */
NPI_API int npi_report_budget_exhausted(const npi_search_report* r);
/* Index document; `input`, `word` may be NULL. n is ignored without word. */
NPI_API npi_status npi_report_index(const npi_search_report* r,
                                    const char* input, const char* word, int n,
                                    char** out);
NPI_API void npi_report_free(npi_search_report* r);

#ifdef __cplusplus
}
#endif

#endif /* NPI_NPI_H */
