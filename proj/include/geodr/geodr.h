/* C interface to the geodr library. All objects are opaque and owned by the
 * caller once returned; release them with the matching *_free function.
 * Functions return GEODR_OK or an error code; the message for the most
 * recent failure on the calling thread is available from geodr_last_error. */
#ifndef GEODR_H
#define GEODR_H

#include <stddef.h>

#if defined(GEODR_BUILDING)
#define GEODR_API __attribute__((visibility("default")))
#else
#define GEODR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum geodr_status {
  GEODR_OK = 0,
  GEODR_E_INVALID_ARGUMENT = 1,
  GEODR_E_PARSE = 2,
  GEODR_E_VALIDATION = 3,
  GEODR_E_SOLVER_ABORT = 4,
  GEODR_E_IO = 5,
  GEODR_E_RANGE = 6,
  GEODR_E_INTERNAL = 7
} geodr_status;

typedef enum geodr_run_status {
  GEODR_RUN_CONVERGED = 0,
  GEODR_RUN_MAX_ITER = 1,
  GEODR_RUN_PARAM_INVALID = 2
} geodr_run_status;

typedef enum geodr_verdict {
  GEODR_VERDICT_PASS = 0,
  GEODR_VERDICT_FAIL = 1,
  GEODR_VERDICT_INCONCLUSIVE = 2
} geodr_verdict;

typedef struct geodr_config geodr_config;
typedef struct geodr_result geodr_result;
typedef struct geodr_table geodr_table;

typedef struct geodr_summary {
  const char* label; /* owned by the result */
  long iterations;
  double stop_metric;
  double wall_ms;
  geodr_run_status status;
} geodr_summary;

typedef struct geodr_record {
  long iter;
  double stop_metric;
  double residual;
  double min_residual;
  double objective;
  double elapsed_ms;
} geodr_record;

typedef struct geodr_oracle_report {
  geodr_verdict verdict;
  double solver_objective;
  double oracle_objective;
  int point_checked;
  double point_distance;
  char message[256];
} geodr_oracle_report;

typedef struct geodr_table_row {
  const char* case_name; /* owned by the table */
  const char* label;
  long reference;
  long iterations;
  double stop_metric;
  double wall_ms;
  int converged;
  int in_band;
} geodr_table_row;

GEODR_API const char* geodr_version(void);
GEODR_API const char* geodr_last_error(void);

/* Configs. Loading validates; on failure geodr_last_error lists every
 * field-level problem, one per line. */
GEODR_API geodr_status geodr_config_load(const char* path, geodr_config** out);
GEODR_API geodr_status geodr_config_parse(const char* text, const char* base_dir, geodr_config** out);
GEODR_API void geodr_config_free(geodr_config* cfg);
/* format: "csv" or "json"; NULL leaves the current value. */
GEODR_API geodr_status geodr_config_set_output(geodr_config* cfg, const char* format, const char* path);
GEODR_API const char* geodr_config_output_path(const geodr_config* cfg);
GEODR_API const char* geodr_config_output_format(const geodr_config* cfg);

/* Runs */
GEODR_API geodr_status geodr_run(const geodr_config* cfg, geodr_result** out);
GEODR_API void geodr_result_free(geodr_result* res);
GEODR_API geodr_status geodr_result_summary(const geodr_result* res, geodr_summary* out);
GEODR_API long geodr_result_record_count(const geodr_result* res);
GEODR_API geodr_status geodr_result_record(const geodr_result* res, long index, geodr_record* out);
/* Copies the recovered solution; *len receives the full size even when cap is
 * too small. buf NULL with cap 0 only queries the size. */
GEODR_API geodr_status geodr_result_solution(const geodr_result* res, double* buf, size_t cap, size_t* len);
GEODR_API size_t geodr_result_warning_count(const geodr_result* res);
GEODR_API const char* geodr_result_warning(const geodr_result* res, size_t index);
/* Trace text as it would be written; owned by the result, valid until the
 * next call for the same result. */
GEODR_API const char* geodr_result_render(const geodr_result* res, const char* format);
/* Writes the trace atomically. format NULL uses the config's format. */
GEODR_API geodr_status geodr_result_write(const geodr_result* res, const char* format, const char* path);

/* Oracle cross-check */
GEODR_API geodr_status geodr_oracle_compare(const geodr_config* cfg, geodr_oracle_report* out);

/* Table reproduction: table is "table1" .. "table4". data_dir NULL uses the
 * built-in data directory; out_dir NULL or "" skips trace files. */
GEODR_API geodr_status geodr_reproduce(const char* table, const char* data_dir, const char* out_dir,
                                       const char* format, geodr_table** out);
GEODR_API void geodr_table_free(geodr_table* t);
GEODR_API size_t geodr_table_row_count(const geodr_table* t);
GEODR_API geodr_status geodr_table_get_row(const geodr_table* t, size_t index, geodr_table_row* out);
GEODR_API int geodr_table_all_ok(const geodr_table* t);
GEODR_API const char* geodr_table_render(const geodr_table* t);

#ifdef __cplusplus
}
#endif

#endif /* GEODR_H */
