#ifndef FBT_FBT_H
#define FBT_FBT_H

/* Finger Based Technique dialer engine: C interface.
 *
 * Every function returning fbt_status leaves a message for the calling
 * thread in fbt_last_error() when it fails. Strings returned through
 * `char**` out-parameters are owned by the caller and released with
 * fbt_string_free. Handles are released with their *_free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FBT_BUILDING_LIBRARY)
#    define FBT_API __declspec(dllexport)
#  else
#    define FBT_API __declspec(dllimport)
#  endif
#else
#  define FBT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fbt_status {
  FBT_OK = 0,
  FBT_INVALID_ARGUMENT = 1,
  FBT_INVALID_ANCHORS,
  FBT_OUT_OF_BOUNDS,
  FBT_PARSE_ERROR,
  FBT_INVARIANT_VIOLATION,
  FBT_SESSION_TERMINATED,
  FBT_MODE_MISMATCH,
  FBT_NON_MONOTONE_TIMESTAMP,
  FBT_UNMAPPABLE_DIGIT,
  FBT_NON_POSITIVE_DURATION,
  FBT_EMPTY_TRANSCRIPTION,
  FBT_TOO_FEW_VALUES,
  FBT_SAMPLE_SIZE_OUT_OF_RANGE,
  FBT_ZERO_VARIANCE,
  FBT_TOO_FEW_GROUPS,
  FBT_ZERO_WITHIN_VARIANCE,
  FBT_EMPTY_SAMPLE,
  FBT_INSUFFICIENT_DATA,
  FBT_IO_ERROR,
  FBT_CONFIG_ERROR,
  FBT_NETWORK_ERROR,
  FBT_INTERNAL_ERROR = 99
} fbt_status;

typedef enum fbt_mode { FBT_MODE_SINGLE = 0, FBT_MODE_DOUBLE = 1 } fbt_mode;
typedef enum fbt_handedness { FBT_LEFT_HOLD = 0, FBT_RIGHT_HOLD = 1 } fbt_handedness;

/* Region ids; the first eleven are the finger-anchored points. */
typedef enum fbt_region {
  FBT_REGION_ABOVE_INDEX = 0,
  FBT_REGION_INDEX,
  FBT_REGION_MIDDLE,
  FBT_REGION_RING,
  FBT_REGION_LITTLE,
  FBT_REGION_BELOW_LITTLE,
  FBT_REGION_ABOVE_THUMB,
  FBT_REGION_THUMB,
  FBT_REGION_BELOW_THUMB,
  FBT_REGION_BETWEEN_THUMB_AND_MIDDLE,
  FBT_REGION_BOTTOM_CENTRE,
  FBT_REGION_SCREEN_CENTRE,
  FBT_REGION_COUNT
} fbt_region;

#define FBT_NO_REGION (-1)

typedef enum fbt_feedback_kind {
  FBT_ANNOUNCE_DIGIT = 0,
  FBT_ANNOUNCE_PENDING,
  FBT_ANNOUNCE_ACTION,
  FBT_ANNOUNCE_ERROR,
  FBT_ANNOUNCE_UNASSIGNED
} fbt_feedback_kind;

typedef struct fbt_layout fbt_layout;
typedef struct fbt_session fbt_session;
typedef struct fbt_server fbt_server;

FBT_API const char* fbt_version(void);
FBT_API const char* fbt_status_name(fbt_status status);
/* Message of the last failure on this thread; "" after a success. */
FBT_API const char* fbt_last_error(void);
FBT_API void fbt_string_free(char* text);

/* ---- layout ------------------------------------------------------------ */

typedef struct fbt_point {
  double x;
  double y;
} fbt_point;

typedef struct fbt_layout_options {
  double width;
  double height;
  fbt_handedness handedness;
  fbt_mode mode;
  int has_anchors; /* 0: default grip */
  fbt_point index, middle, ring, little, thumb;
  /* Negative values select the defaults. */
  double inset;
  double edge_margin;
  double bottom_margin;
  double activation_radius;
} fbt_layout_options;

/* 480 x 800, left hold, single mode, default grip and parameters. */
FBT_API void fbt_layout_options_init(fbt_layout_options* options);

FBT_API fbt_status fbt_layout_create(const fbt_layout_options* options, fbt_layout** out);
FBT_API fbt_status fbt_layout_load(const char* path, fbt_layout** out);
FBT_API fbt_status fbt_layout_from_json(const char* text, fbt_layout** out);
FBT_API fbt_status fbt_layout_save(const fbt_layout* layout, const char* path);
FBT_API fbt_status fbt_layout_to_json(const fbt_layout* layout, char** out);
FBT_API fbt_status fbt_layout_mirror(const fbt_layout* layout, fbt_layout** out);
FBT_API fbt_status fbt_layout_with_mode(const fbt_layout* layout, fbt_mode mode, fbt_layout** out);
FBT_API fbt_mode fbt_layout_mode(const fbt_layout* layout);
FBT_API fbt_status fbt_layout_region_center(const fbt_layout* layout, int region, fbt_point* out);
/* Writes the action string ("digit:4", "pair:1/2", "backspace", ...). */
FBT_API fbt_status fbt_layout_region_action(const fbt_layout* layout, int region, char** out);
FBT_API double fbt_layout_activation_radius(const fbt_layout* layout);
/* *out_region is a fbt_region or FBT_NO_REGION. */
FBT_API fbt_status fbt_layout_hit_test(const fbt_layout* layout, double x, double y, int* out_region);
FBT_API void fbt_layout_free(fbt_layout* layout);

/* ---- live entry -------------------------------------------------------- */

typedef struct fbt_feedback {
  fbt_feedback_kind kind;
  int digit; /* -1 when not applicable */
  const char* detail;
  const char* utterance;
} fbt_feedback;

/* Called once per feedback event; pointers are valid during the call only. */
typedef void (*fbt_feedback_fn)(const fbt_feedback* event, void* user);

FBT_API fbt_status fbt_session_create(const fbt_layout* layout, fbt_session** out);
/* On failure the session is unchanged. */
FBT_API fbt_status fbt_session_tap(fbt_session* session, double x, double y, double t_ms,
                                   fbt_feedback_fn callback, void* user);
FBT_API const char* fbt_session_buffer(const fbt_session* session);
/* Pending digit (double mode) or -1. */
FBT_API int fbt_session_pending(const fbt_session* session);
FBT_API int fbt_session_terminated(const fbt_session* session);
FBT_API size_t fbt_session_keystrokes(const fbt_session* session);
FBT_API size_t fbt_session_corrections(const fbt_session* session);
FBT_API void fbt_session_free(fbt_session* session);

/* Minimal region sequence for `number`, excluding Call. When `out` is NULL
 * or too small only *count is written and FBT_INVALID_ARGUMENT is returned
 * for a too-small buffer. */
FBT_API fbt_status fbt_canonical_sequence(const char* number, fbt_mode mode, int* out, size_t capacity,
                                          size_t* count);

/* ---- metrics ----------------------------------------------------------- */

FBT_API fbt_status fbt_wpm(size_t transcribed_length, double seconds, double* out);
FBT_API fbt_status fbt_error_count(const char* presented, const char* transcribed, size_t* out);

/* ---- statistics -------------------------------------------------------- */

typedef struct fbt_test_result {
  double statistic;
  int df1; /* -1 when absent */
  int df2; /* -1 when absent */
  double p_value;
  int reject_at_05;
} fbt_test_result;

typedef enum fbt_mw_method { FBT_MW_AUTO = 0, FBT_MW_EXACT, FBT_MW_ASYMPTOTIC } fbt_mw_method;

FBT_API fbt_status fbt_mean_sd(const double* values, size_t n, double* mean, double* sd);
FBT_API fbt_status fbt_shapiro_wilk(const double* values, size_t n, fbt_test_result* out);
/* `groups[i]` holds `sizes[i]` values. */
FBT_API fbt_status fbt_anova_oneway(const double* const* groups, const size_t* sizes, size_t k,
                                    fbt_test_result* out);
FBT_API fbt_status fbt_mann_whitney_u(const double* a, size_t na, const double* b, size_t nb,
                                      fbt_mw_method method, fbt_test_result* out);

/* ---- harness ----------------------------------------------------------- */

/* Replays a trace file and writes the results CSV. `layout_path` may be NULL
 * to use the layout the trace references. */
FBT_API fbt_status fbt_replay_file(const char* trace_path, const char* layout_path, char** csv_out);

typedef struct fbt_simulation_options {
  uint64_t seed;
  size_t participants;
  size_t trials;
  double tap_sigma;
  double tap_latency_mu, tap_latency_sigma;
  double decision_latency_mu, decision_latency_sigma;
  const char* const* numbers; /* NULL: drawn from the seed */
  size_t number_count;
} fbt_simulation_options;

FBT_API void fbt_simulation_options_init(fbt_simulation_options* options);

/* Writes `<out_dir>/layout-<mode>.json` and one trace per participant,
 * `<out_dir>/<participant>-<mode>.json`. */
FBT_API fbt_status fbt_simulate(const fbt_simulation_options* options, const fbt_layout* layout,
                                const char* out_dir);

/* Evaluates trace files. A directory contributes every trace document it
 * holds directly. Report and CSV outputs may be NULL. */
FBT_API fbt_status fbt_evaluate_files(const char* const* trace_paths, size_t count, int include_incomplete,
                                      unsigned workers, char** report_json, char** csv);

/* ---- live service ------------------------------------------------------ */

FBT_API fbt_status fbt_server_start(const fbt_layout* layout, const char* address, uint16_t port,
                                    const char* static_dir, fbt_server** out);
FBT_API uint16_t fbt_server_port(const fbt_server* server);
FBT_API void fbt_server_stop(fbt_server* server);

#ifdef __cplusplus
}
#endif

#endif /* FBT_FBT_H */
