#include "metaffine/metaffine_c.h"

#include "metaffine/error.hpp"
#include "metaffine/scenario.hpp"

#include <sstream>

struct maf_scenario {
  maf::Scenario scenario;
};

struct maf_report {
  maf::Report report;
  std::string buffer;
};

struct maf_expr {
  maf::Expr expr;
  maf::VarTable vars;
  std::string buffer;
};

namespace {

thread_local std::string last_error;
thread_local std::size_t last_line = 0;
thread_local std::size_t last_column = 0;

template <class F> maf_status guarded(F &&f) {
  last_error.clear();
  last_line = last_column = 0;
  try {
    f();
    return MAF_OK;
  } catch (const maf::ParseError &e) {
    last_error = e.what();
    last_line = e.line();
    last_column = e.column();
    return MAF_ERR_PARSE;
  } catch (const maf::UnknownIdentifierError &e) {
    last_error = e.what();
    return MAF_ERR_PARSE;
  } catch (const maf::DomainError &e) {
    last_error = e.what();
    return MAF_ERR_DOMAIN;
  } catch (const maf::SingularError &e) {
    last_error = e.what();
    return MAF_ERR_SINGULAR;
  } catch (const maf::MismatchError &e) {
    last_error = e.what();
    return MAF_ERR_MISMATCH;
  } catch (const maf::SymmetryError &e) {
    last_error = e.what();
    return MAF_ERR_SYMMETRY;
  } catch (const maf::ExpansionBudgetError &e) {
    last_error = e.what();
    return MAF_ERR_BUDGET;
  } catch (const maf::Error &e) {
    last_error = e.what();
    return MAF_ERR_IO;
  } catch (const std::exception &e) {
    last_error = e.what();
    return MAF_ERR_INTERNAL;
  }
}

maf_status invalid(const char *what) {
  last_error = what;
  last_line = last_column = 0;
  return MAF_ERR_INVALID_ARGUMENT;
}

maf::RunOptions convert(const maf_run_options *o) {
  maf::RunOptions r;
  if (o) {
    r.seed = o->seed;
    r.samples = o->samples > 0 ? o->samples : r.samples;
    r.serial = o->serial != 0;
  }
  return r;
}

} // namespace

extern "C" {

const char *maf_version(void) { return "0.1.0"; }
const char *maf_last_error(void) { return last_error.c_str(); }
size_t maf_last_error_line(void) { return last_line; }
size_t maf_last_error_column(void) { return last_column; }

void maf_run_options_init(maf_run_options *opts) {
  if (!opts)
    return;
  const maf::RunOptions d;
  opts->seed = d.seed;
  opts->samples = d.samples;
  opts->serial = d.serial ? 1 : 0;
}

maf_status maf_scenario_parse(const char *text, maf_scenario **out) {
  if (!text || !out)
    return invalid("null argument");
  return guarded([&] { *out = new maf_scenario{maf::Scenario::parse(text)}; });
}

maf_status maf_scenario_load(const char *path, maf_scenario **out) {
  if (!path || !out)
    return invalid("null argument");
  return guarded([&] { *out = new maf_scenario{maf::Scenario::load(path)}; });
}

maf_status maf_scenario_task_count(const maf_scenario *s, size_t *out) {
  if (!s || !out)
    return invalid("null argument");
  *out = s->scenario.task_count();
  return MAF_OK;
}

void maf_scenario_free(maf_scenario *s) { delete s; }

maf_status maf_scenario_run(const maf_scenario *s, const maf_run_options *opts, maf_report **out) {
  if (!s || !out)
    return invalid("null argument");
  return guarded([&] { *out = new maf_report{s->scenario.run(convert(opts)), {}}; });
}

maf_status maf_selfcheck(const maf_run_options *opts, unsigned flags, maf_report **out) {
  if (!out)
    return invalid("null argument");
  return guarded([&] {
    maf::SelfcheckOptions so;
    so.run = convert(opts);
    so.tamper_gamma = (flags & MAF_SELFCHECK_TAMPER_GAMMA) != 0;
    *out = new maf_report{maf::selfcheck(so), {}};
  });
}

maf_status maf_report_text(maf_report *r, int timing, const char **out) {
  if (!r || !out)
    return invalid("null argument");
  return guarded([&] {
    r->buffer = r->report.text(timing != 0);
    *out = r->buffer.c_str();
  });
}

maf_status maf_report_json(maf_report *r, int timing, const char **out) {
  if (!r || !out)
    return invalid("null argument");
  return guarded([&] {
    r->buffer = r->report.json(timing != 0);
    *out = r->buffer.c_str();
  });
}

maf_status maf_report_exit_code(const maf_report *r, int *out) {
  if (!r || !out)
    return invalid("null argument");
  *out = r->report.exit_code();
  return MAF_OK;
}

maf_status maf_report_task_count(const maf_report *r, size_t *out) {
  if (!r || !out)
    return invalid("null argument");
  *out = r->report.tasks.size();
  return MAF_OK;
}

maf_status maf_report_task_status(const maf_report *r, size_t i, const char **out) {
  if (!r || !out)
    return invalid("null argument");
  if (i >= r->report.tasks.size())
    return invalid("task index out of range");
  *out = maf::status_name(r->report.tasks[i].status);
  return MAF_OK;
}

void maf_report_free(maf_report *r) { delete r; }

maf_status maf_expr_parse(const char *text, const char *variables, maf_expr **out) {
  if (!text || !out)
    return invalid("null argument");
  return guarded([&] {
    maf::VarTable vars;
    std::istringstream in(variables ? variables : "");
    for (std::string v; in >> v;)
      vars.add(v, maf::VarRole::ChartCoordinate);
    maf::Expr e = maf::parse(text, vars);
    *out = new maf_expr{std::move(e), std::move(vars), {}};
  });
}

maf_status maf_expr_diff(const maf_expr *e, const char *variable, maf_expr **out) {
  if (!e || !variable || !out)
    return invalid("null argument");
  if (!e->vars.contains(variable))
    return invalid("unknown variable");
  return guarded([&] { *out = new maf_expr{maf::diff(e->expr, std::string(variable)), e->vars, {}}; });
}

maf_status maf_expr_string(maf_expr *e, const char **out) {
  if (!e || !out)
    return invalid("null argument");
  return guarded([&] {
    e->buffer = maf::to_string(e->expr);
    *out = e->buffer.c_str();
  });
}

maf_status maf_expr_is_zero(const maf_expr *e, int samples, int *out) {
  if (!e || !out)
    return invalid("null argument");
  return guarded([&] {
    maf::ZeroTestOptions o;
    if (samples > 0)
      o.samples = samples;
    *out = maf::is_zero(e->expr, o).zero() ? 1 : 0;
  });
}

void maf_expr_free(maf_expr *e) { delete e; }

} // extern "C"
