/* dnastore: block-addressable DNA data storage, simulated end-to-end.
 *
 * C API of the shared library. All functions return a dnastore_status;
 * every non-OK return leaves a human-readable message in
 * dnastore_last_error() (thread-local). Objects are opaque handles
 * released with their matching _free function.
 */
#ifndef DNASTORE_H
#define DNASTORE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DNASTORE_API __declspec(dllexport)
#else
#define DNASTORE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnastore_status {
    DNASTORE_OK = 0,
    DNASTORE_ERR_INVALID_ARGUMENT = 1,
    DNASTORE_ERR_BOUNDS = 2,
    DNASTORE_ERR_MALFORMED = 3,
    DNASTORE_ERR_IO = 4,
    DNASTORE_ERR_PARSE = 5,
    DNASTORE_ERR_DECODE = 6,
    DNASTORE_ERR_PATCH = 7,
    DNASTORE_ERR_INTERNAL = 8
} dnastore_status;

typedef struct dnastore_manifest dnastore_manifest;
typedef struct dnastore_pool dnastore_pool;
typedef struct dnastore_reads dnastore_reads;
typedef struct dnastore_decoded dnastore_decoded;

DNASTORE_API const char* dnastore_version(void);
DNASTORE_API const char* dnastore_last_error(void);

/* ------------------------------------------------------------------ */
/* Parameters. Zero-initialize and override what you need; fields at 0
 * (or negative where marked) fall back to the library defaults.       */

typedef struct dnastore_encode_params {
    int tree_depth;           /* 0 -> 5 */
    uint64_t tree_seed;
    uint64_t randomizer_seed;
    const char* fwd_primer;   /* NULL -> built-in default pair */
    const char* rev_primer;
} dnastore_encode_params;

typedef struct dnastore_pcr_params {
    int cycles;               /* < 0 -> 8 (elongated) / pass explicitly */
    double efficiency;        /* <= 0 -> 0.95 */
    double misprime_decay;    /* < 0 -> 0.25 */
    int max_edit_distance;    /* < 0 -> 3 */
    uint64_t seed;
} dnastore_pcr_params;

typedef struct dnastore_channel_params {
    double p_sub;             /* < 0 -> 0.002 */
    double p_ins;             /* < 0 -> 0.0005 */
    double p_del;             /* < 0 -> 0.0005 */
    uint64_t seed;
} dnastore_channel_params;

typedef struct dnastore_mix_params {
    dnastore_pcr_params pcr;  /* cycles < 0 -> 15 */
    double relative_error;    /* measurement noise, < 0 -> 0.0 */
    uint64_t seed;
} dnastore_mix_params;

typedef enum dnastore_mix_mode {
    DNASTORE_MIX_MEASURE_THEN_AMPLIFY = 0,
    DNASTORE_MIX_AMPLIFY_THEN_MEASURE = 1
} dnastore_mix_mode;

typedef struct dnastore_decode_params {
    double cluster_threshold; /* <= 0 -> 0.15 */
    int bma_window;           /* <= 0 -> 3 */
    int primer_edits;         /* < 0 -> 2 */
    int max_candidates;       /* <= 0 -> 1; > 1 enables candidate recursion */
} dnastore_decode_params;

typedef struct dnastore_metrics {
    size_t total_reads;
    double on_target_fraction;
    double misprime_fraction;
    double other_block_fraction;
    double background_fraction;
    double unwanted_to_wanted;
} dnastore_metrics;

typedef struct dnastore_capacity_point {
    int index_len;
    double capacity_bytes;
    double density_bits_per_base;
} dnastore_capacity_point;

/* ------------------------------------------------------------------ */
/* Manifests                                                           */

DNASTORE_API dnastore_status dnastore_manifest_load(const char* path, dnastore_manifest** out);
DNASTORE_API dnastore_status dnastore_manifest_save(const dnastore_manifest* m, const char* path);
DNASTORE_API void dnastore_manifest_free(dnastore_manifest* m);
DNASTORE_API uint64_t dnastore_manifest_block_count(const dnastore_manifest* m);
DNASTORE_API uint64_t dnastore_manifest_file_size(const dnastore_manifest* m);
DNASTORE_API int dnastore_manifest_version_count(const dnastore_manifest* m, uint64_t block);
DNASTORE_API dnastore_status dnastore_manifest_primers(const dnastore_manifest* m, char* fwd,
                                                       size_t fwd_cap, char* rev, size_t rev_cap);
/* levels < 0 selects full elongation (tree depth). */
DNASTORE_API dnastore_status dnastore_elongated_primer(const dnastore_manifest* m, uint64_t block,
                                                       int levels, char* out, size_t cap);

/* ------------------------------------------------------------------ */
/* Pools and reads                                                     */

DNASTORE_API dnastore_status dnastore_pool_new(dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_pool_load(const char* path, dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_pool_save(const dnastore_pool* pool, const char* path);
DNASTORE_API void dnastore_pool_free(dnastore_pool* pool);
DNASTORE_API size_t dnastore_pool_unique_count(const dnastore_pool* pool);
DNASTORE_API double dnastore_pool_total_abundance(const dnastore_pool* pool);

DNASTORE_API dnastore_status dnastore_reads_load(const char* path, dnastore_reads** out);
DNASTORE_API dnastore_status dnastore_reads_save(const dnastore_reads* reads, const char* path);
DNASTORE_API void dnastore_reads_free(dnastore_reads* reads);
DNASTORE_API size_t dnastore_reads_count(const dnastore_reads* reads);
/* Keep the first n reads (subsampling a readout). */
DNASTORE_API dnastore_status dnastore_reads_truncate(dnastore_reads* reads, size_t n);

/* ------------------------------------------------------------------ */
/* Encoding and updates                                                */

DNASTORE_API dnastore_status dnastore_encode(const uint8_t* data, size_t len,
                                             const dnastore_encode_params* params,
                                             dnastore_manifest** out_manifest, dnastore_pool** out_pool);

/* Encodes one update patch into the block's next free version slot,
 * appends its 15 strands to `pool` and bumps the manifest's version
 * count for the block. */
DNASTORE_API dnastore_status dnastore_patch_encode(dnastore_manifest* m, uint64_t block,
                                                   uint8_t del_start, uint8_t del_len, uint8_t ins_pos,
                                                   const uint8_t* ins, size_t ins_len, dnastore_pool* pool);

/* ------------------------------------------------------------------ */
/* Wet-lab simulation                                                  */

DNASTORE_API dnastore_status dnastore_pcr(const dnastore_pool* pool, const char* fwd, const char* rev,
                                          const dnastore_pcr_params* params, dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_multiplex_pcr(const dnastore_pool* pool, const char* const* fwds,
                                                    const char* const* revs, size_t n_pairs,
                                                    const dnastore_pcr_params* params, dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_two_stage_pcr(const dnastore_pool* pool, const char* fwd,
                                                    const char* rev, const char* elongated_fwd,
                                                    const dnastore_pcr_params* stage1,
                                                    const dnastore_pcr_params* stage2, dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_mix(const dnastore_pool* data_pool, const dnastore_pool* update_pool,
                                          const char* fwd, const char* rev, dnastore_mix_mode mode,
                                          const dnastore_mix_params* params, dnastore_pool** out);
DNASTORE_API dnastore_status dnastore_sequence(const dnastore_pool* pool, size_t n_reads,
                                               const dnastore_channel_params* channel, dnastore_reads** out);

/* ------------------------------------------------------------------ */
/* Decoding, metrics, analysis                                         */

DNASTORE_API dnastore_status dnastore_decode_block(const dnastore_reads* reads, const dnastore_manifest* m,
                                                   uint64_t block, const dnastore_decode_params* params,
                                                   dnastore_decoded** out);
DNASTORE_API void dnastore_decoded_free(dnastore_decoded* d);
DNASTORE_API dnastore_status dnastore_decoded_original(const dnastore_decoded* d, const uint8_t** ptr,
                                                       size_t* len);
DNASTORE_API dnastore_status dnastore_decoded_updated(const dnastore_decoded* d, const uint8_t** ptr,
                                                      size_t* len);
DNASTORE_API int dnastore_decoded_version_count(const dnastore_decoded* d);
DNASTORE_API dnastore_status dnastore_decoded_record(const dnastore_decoded* d, int version,
                                                     const uint8_t** ptr, size_t* len);
/* JSON report (classes, counters, patches); owned by the handle. */
DNASTORE_API const char* dnastore_decoded_report(const dnastore_decoded* d);

/* Whole-partition decode over strict-parsing reads; *out is malloc'd and
 * must be released with dnastore_buffer_free. */
DNASTORE_API dnastore_status dnastore_decode_all(const dnastore_reads* reads, const dnastore_manifest* m,
                                                 uint8_t** out, size_t* out_len);
DNASTORE_API void dnastore_buffer_free(uint8_t* buf);

DNASTORE_API dnastore_status dnastore_compute_metrics(const dnastore_reads* reads,
                                                      const dnastore_manifest* m, uint64_t target_block,
                                                      const dnastore_decode_params* params,
                                                      dnastore_metrics* out);

/* Per-(block, version) read counts as CSV ("block,version,reads\n...");
 * *out is malloc'd, release with dnastore_string_free. */
DNASTORE_API dnastore_status dnastore_stats_csv(const dnastore_reads* reads, const dnastore_manifest* m,
                                                char** out);
DNASTORE_API void dnastore_string_free(char* s);

DNASTORE_API dnastore_status dnastore_capacity(int index_len, dnastore_capacity_point* out);
/* Exact decimal byte count (4^110 does not fit a double); buffer of 80 is
 * always enough. */
DNASTORE_API dnastore_status dnastore_capacity_bytes_decimal(int index_len, char* out, size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DNASTORE_H */
