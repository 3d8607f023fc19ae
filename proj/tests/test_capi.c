/* Exercises the C interface through the shared library only. */

#include "metaffine/metaffine_c.h"

#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                            \
  do {                                                                          \
    if (!(cond)) {                                                              \
      fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, __LINE__, \
              #cond, maf_last_error());                                         \
      ++failures;                                                               \
    }                                                                           \
  } while (0)

static const char *sphere =
    "[chart]\n"
    "coords = th ph\n"
    "[metric g]\n"
    "signature = riemannian\n"
    "diag = 1; sin(th)^2\n"
    "[task R]\n"
    "op = scalar_curvature\n"
    "args = g\n"
    "expect = -2\n"
    "[task G]\n"
    "op = christoffel\n"
    "args = g\n";

static void scenarios(void) {
  maf_scenario *s = NULL;
  maf_report *r = NULL;
  maf_run_options o;
  size_t n = 0;
  int code = -1;
  const char *text = NULL, *json = NULL, *status = NULL;
  char first[4096];

  EXPECT(maf_scenario_parse(sphere, &s) == MAF_OK);
  EXPECT(maf_scenario_task_count(s, &n) == MAF_OK && n == 2);
  maf_run_options_init(&o);
  EXPECT(o.samples == 32);
  EXPECT(maf_scenario_run(s, &o, &r) == MAF_OK);
  EXPECT(maf_report_exit_code(r, &code) == MAF_OK && code == 0);
  EXPECT(maf_report_task_count(r, &n) == MAF_OK && n == 2);
  EXPECT(maf_report_task_status(r, 0, &status) == MAF_OK && strcmp(status, "pass") == 0);
  EXPECT(maf_report_task_status(r, 1, &status) == MAF_OK && strcmp(status, "ok") == 0);
  EXPECT(maf_report_task_status(r, 2, &status) == MAF_ERR_INVALID_ARGUMENT);
  EXPECT(maf_report_text(r, 0, &text) == MAF_OK && strstr(text, "proven-zero") != NULL);
  EXPECT(maf_report_json(r, 0, &json) == MAF_OK && json[0] == '{');
  strncpy(first, json, sizeof first - 1);
  first[sizeof first - 1] = '\0';
  maf_report_free(r);

  o.serial = 1;
  EXPECT(maf_scenario_run(s, &o, &r) == MAF_OK);
  EXPECT(maf_report_json(r, 0, &json) == MAF_OK && strncmp(first, json, sizeof first - 1) == 0);
  maf_report_free(r);
  maf_scenario_free(s);

  s = NULL;
  EXPECT(maf_scenario_parse("[chart]\ndim = 2\n[task t]\nop = nope\n", &s) == MAF_ERR_PARSE);
  EXPECT(s == NULL);
  EXPECT(maf_last_error_line() == 4);
  EXPECT(strstr(maf_last_error(), "nope") != NULL);
  EXPECT(maf_scenario_load("/nonexistent/file.scn", &s) == MAF_ERR_IO);
  EXPECT(maf_scenario_parse(NULL, &s) == MAF_ERR_INVALID_ARGUMENT);
}

static void selfcheck(void) {
  maf_report *r = NULL;
  int code = -1;
  EXPECT(maf_selfcheck(NULL, 0, &r) == MAF_OK);
  EXPECT(maf_report_exit_code(r, &code) == MAF_OK && code == 0);
  maf_report_free(r);
  EXPECT(maf_selfcheck(NULL, MAF_SELFCHECK_TAMPER_GAMMA, &r) == MAF_OK);
  EXPECT(maf_report_exit_code(r, &code) == MAF_OK && code == 1);
  maf_report_free(r);
}

static void expressions(void) {
  maf_expr *e = NULL, *d = NULL, *z = NULL;
  const char *s = NULL;
  int zero = -1;
  EXPECT(maf_expr_parse("x^3 + sin(y)*x", "x y", &e) == MAF_OK);
  EXPECT(maf_expr_diff(e, "x", &d) == MAF_OK);
  EXPECT(maf_expr_string(d, &s) == MAF_OK);
  EXPECT(maf_expr_is_zero(d, 0, &zero) == MAF_OK && zero == 0);
  EXPECT(maf_expr_diff(e, "q", &z) == MAF_ERR_INVALID_ARGUMENT);
  maf_expr_free(d);
  maf_expr_free(e);
  EXPECT(maf_expr_parse("sin(x)^2 + cos(x)^2 - 1", "x", &z) == MAF_OK);
  EXPECT(maf_expr_is_zero(z, 8, &zero) == MAF_OK && zero == 1);
  maf_expr_free(z);
  EXPECT(maf_expr_parse("x + w", "x", &z) == MAF_ERR_PARSE);
  EXPECT(maf_version()[0] != '\0');
}

int main(void) {
  scenarios();
  selfcheck();
  expressions();
  if (failures)
    fprintf(stderr, "%d expectation(s) failed\n", failures);
  else
    printf("c api: all expectations met\n");
  return failures ? 1 : 0;
}
