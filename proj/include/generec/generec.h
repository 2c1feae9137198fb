/*
 * generec C API.
 *
 * Every function returns a generec_status. On failure, generec_last_error()
 * and generec_last_error_json() describe the error for the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with generec_free().
 *
 * config_json arguments may be NULL or "" for defaults. A non-zero seed
 * overrides every seed in the config.
 */
#ifndef GENEREC_H
#define GENEREC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(GENEREC_BUILDING)
#define GENEREC_API __attribute__((visibility("default")))
#else
#define GENEREC_API
#endif

typedef enum generec_status {
    GENEREC_OK = 0,
    GENEREC_ERR_CONFIG = 1,
    GENEREC_ERR_DATA = 2,
    GENEREC_ERR_IO = 3,
    GENEREC_ERR_PARSE = 4,
    GENEREC_ERR_NOT_FOUND = 5,
    GENEREC_ERR_UNSERVED = 6,
    GENEREC_ERR_INVALID_ARGUMENT = 7,
    GENEREC_ERR_INTERNAL = 8
} generec_status;

typedef struct generec_engine generec_engine;

GENEREC_API const char* generec_version(void);
GENEREC_API const char* generec_status_name(generec_status status);

/* Valid until the next failing call on the same thread. */
GENEREC_API const char* generec_last_error(void);

/* {"status", "message", "code"} plus {"kind", "token", "offset"} for parse errors. */
GENEREC_API const char* generec_last_error_json(void);

GENEREC_API void generec_free(char* s);

/* ---- offline commands ---------------------------------------------------- */

/* Writes a planted-cluster corpus under out_dir (manifest.json). */
GENEREC_API generec_status generec_synth(const char* config_json, uint64_t seed, const char* out_dir,
                                         char** summary_json);

/* Trains the preference scorer; writes <out_prefix>.grtf and <out_prefix>.json. */
GENEREC_API generec_status generec_train(const char* manifest, const char* config_json, uint64_t seed,
                                         const char* out_prefix, char** report_json);

/* kind: "thumbnail" | "clip" | "revise" | "create". */
GENEREC_API generec_status generec_experiment(const char* kind, const char* manifest, const char* scorer_prefix,
                                              const char* config_json, uint64_t seed, char** report_json,
                                              char** report_tsv);

/* Sets are corpus manifests or directories of .grtf item tensors. */
GENEREC_API generec_status generec_fvd(const char* set_a, const char* set_b, const char* config_json,
                                       double* out_value, char** report_json);

/* ---- live engine --------------------------------------------------------- */

/* scorer_prefix may be NULL (ranking then falls back to preference dot products). */
GENEREC_API generec_status generec_engine_open(const char* manifest, const char* scorer_prefix,
                                               const char* config_json, uint64_t seed, generec_engine** out);
GENEREC_API void generec_engine_close(generec_engine* engine);

/* user_id may be NULL for an anonymous cold-start user. -> {"session_id","user_id"} */
GENEREC_API generec_status generec_session_create(generec_engine* engine, const char* user_id, char** session_json);

/* One loop step without an instruction. k <= 0 uses the configured default. */
GENEREC_API generec_status generec_session_feed(generec_engine* engine, const char* session_id, int k,
                                                char** recommendation_json);

/* One loop step with instruction text (the DSL). */
GENEREC_API generec_status generec_session_instruction(generec_engine* engine, const char* session_id,
                                                       const char* text, int k, char** recommendation_json);

/* signal: "like" | "dislike" | "click". */
GENEREC_API generec_status generec_session_feedback(generec_engine* engine, const char* session_id,
                                                    const char* item_id, const char* signal, char** ack_json);

GENEREC_API generec_status generec_session_profile(generec_engine* engine, const char* session_id,
                                                   char** profile_json);

/* Full snapshot: {"session_id","user_id","served","feedback",...,"ledger"}. */
GENEREC_API generec_status generec_session_snapshot(generec_engine* engine, const char* session_id,
                                                    char** snapshot_json);

/* Writes session.json and ledger tensors under dir. With promote != 0 also
   writes dir/promoted/manifest.json: the corpus plus passing generated items. */
GENEREC_API generec_status generec_session_save(generec_engine* engine, const char* session_id, const char* dir,
                                                int promote);

/* session_id may be NULL; when given, the session's generated items resolve too. */
GENEREC_API generec_status generec_item_frames(generec_engine* engine, const char* item_id, const char* session_id,
                                               char** frames_json);

#ifdef __cplusplus
}
#endif

#endif /* GENEREC_H */
