#ifndef METAFFINE_C_H
#define METAFFINE_C_H

/* C interface to the metaffine library. Every function returns a status
 * code; on failure maf_last_error() describes the problem for the calling
 * thread. Strings returned through out-parameters stay valid until the
 * owning handle is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MAF_API __declspec(dllexport)
#else
#define MAF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum maf_status {
  MAF_OK = 0,
  MAF_ERR_INVALID_ARGUMENT = 1,
  MAF_ERR_PARSE = 2,
  MAF_ERR_IO = 3,
  MAF_ERR_DOMAIN = 4,
  MAF_ERR_SINGULAR = 5,
  MAF_ERR_MISMATCH = 6,
  MAF_ERR_SYMMETRY = 7,
  MAF_ERR_BUDGET = 8,
  MAF_ERR_INTERNAL = 9
} maf_status;

typedef struct maf_scenario maf_scenario;
typedef struct maf_report maf_report;
typedef struct maf_expr maf_expr;

typedef struct maf_run_options {
  uint64_t seed;
  int samples;
  int serial;
} maf_run_options;

enum { MAF_SELFCHECK_TAMPER_GAMMA = 1 };

MAF_API const char *maf_version(void);
MAF_API const char *maf_last_error(void);
/* Line and column of the last parse error, 0 when unknown. */
MAF_API size_t maf_last_error_line(void);
MAF_API size_t maf_last_error_column(void);
MAF_API void maf_run_options_init(maf_run_options *opts);

MAF_API maf_status maf_scenario_parse(const char *text, maf_scenario **out);
MAF_API maf_status maf_scenario_load(const char *path, maf_scenario **out);
MAF_API maf_status maf_scenario_task_count(const maf_scenario *s, size_t *out);
MAF_API void maf_scenario_free(maf_scenario *s);

/* opts may be NULL for defaults. */
MAF_API maf_status maf_scenario_run(const maf_scenario *s, const maf_run_options *opts, maf_report **out);
MAF_API maf_status maf_selfcheck(const maf_run_options *opts, unsigned flags, maf_report **out);

MAF_API maf_status maf_report_text(maf_report *r, int timing, const char **out);
MAF_API maf_status maf_report_json(maf_report *r, int timing, const char **out);
MAF_API maf_status maf_report_exit_code(const maf_report *r, int *out);
MAF_API maf_status maf_report_task_count(const maf_report *r, size_t *out);
/* Status of task i: "ok", "pass", "fail" or "error". */
MAF_API maf_status maf_report_task_status(const maf_report *r, size_t i, const char **out);
MAF_API void maf_report_free(maf_report *r);

/* Expressions over the given space-separated variable names. */
MAF_API maf_status maf_expr_parse(const char *text, const char *variables, maf_expr **out);
MAF_API maf_status maf_expr_diff(const maf_expr *e, const char *variable, maf_expr **out);
MAF_API maf_status maf_expr_string(maf_expr *e, const char **out);
/* *out is 1 when e vanishes identically (proven or probable), 0 otherwise. */
MAF_API maf_status maf_expr_is_zero(const maf_expr *e, int samples, int *out);
MAF_API void maf_expr_free(maf_expr *e);

#ifdef __cplusplus
}
#endif

#endif
