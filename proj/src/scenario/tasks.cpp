#include "internal.hpp"

#include "metaffine/brst.hpp"

#include <chrono>
#include <atomic>
#include <thread>

namespace maf {

std::string display(const Expr &e) {
  try {
    const Expr x = expand(e, 400);
    const std::string a = to_string(x);
    const std::string b = to_string(e);
    return a.size() <= b.size() ? a : b;
  } catch (const ExpansionBudgetError &) {
    return to_string(e);
  }
}

namespace {

std::string index_label(const std::vector<int> &idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i)
    s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

Expr simplified(const Expr &e) {
  try {
    return expand(e, 400);
  } catch (const ExpansionBudgetError &) {
    return e;
  }
}

/// Components that test zero are omitted.
bool shown(const Expr &v, const ZeroTestOptions &opts) { return !v.is_zero() && !is_zero(v, opts).zero(); }

void add_components(TaskRecord &rec, const TensorField &t, const ZeroTestOptions &opts) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Expr v = simplified(t.flat(i));
    if (shown(v, opts))
      rec.components.push_back({index_label(t.unflatten(i)), v});
  }
}

void add_components(TaskRecord &rec, const WorldConnection &g, const ZeroTestOptions &opts) {
  const int n = g.dim();
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        const Expr v = simplified(g(l, m, k));
        if (shown(v, opts))
          rec.components.push_back({index_label({l, m, k}), v});
      }
}

TensorField as_tensor(const WorldConnection &g) {
  return TensorField(g.chart(), "dud",
                     [&] {
                       std::vector<Expr> v;
                       const int n = g.dim();
                       for (int l = 0; l < n; ++l)
                         for (int m = 0; m < n; ++m)
                           for (int k = 0; k < n; ++k)
                             v.push_back(g(l, m, k));
                       return v;
                     }());
}

void add_report(TaskRecord &rec, const IdentityReport &r) {
  for (const auto &c : r.checks)
    rec.checks.push_back({c.name, c.verdict});
}

const Chart &chart_of(const TaskContext &t) {
  if (!t.scenario.chart)
    throw MismatchError("task needs a [chart]");
  return *t.scenario.chart;
}

/// `expect = zero` on a tensor result.
void expect_tensor(const TaskContext &t, TaskRecord &rec, const TensorField &value) {
  const auto e = t.spec.option("expect");
  if (!e)
    return;
  if (*e != "zero" && *e != "0")
    throw MismatchError("tensor results accept only expect = zero");
  rec.checks.push_back({"components vanish", zero_test(value, t.opts)});
}

void expect_scalar(const TaskContext &t, TaskRecord &rec, const Expr &value) {
  const auto it = t.spec.options.find("expect");
  if (it == t.spec.options.end())
    return;
  const Setting &s = it->second;
  Expr want;
  try {
    want = chart_of(t).parse(s.value == "zero" ? "0" : s.value);
  } catch (const ParseError &e) {
    throw ParseError(e.what(), 0, s.line, s.column + e.offset());
  } catch (const UnknownIdentifierError &e) {
    throw ParseError(e.what(), 0, s.line, s.column + e.offset());
  }
  rec.checks.push_back({"value = " + s.value, is_zero(value - want, t.opts)});
}

Rational rational_option(const TaskSpec &spec, const std::string &key, const Rational &fallback) {
  const auto it = spec.options.find(key);
  if (it == spec.options.end())
    return fallback;
  Expr e;
  try {
    e = parse(it->second.value, VarTable{});
  } catch (const Error &err) {
    throw ParseError(std::string("option ") + key + ": " + err.what(), 0, it->second.line,
                     it->second.column);
  }
  if (!e.is_constant())
    throw ParseError("option " + key + " must be a rational number", 0, it->second.line,
                     it->second.column);
  return e.value();
}

template <class T> const T &arg(const TaskContext &t, std::size_t i) { return std::get<T>(*t.args.at(i)); }

WorldConnection connection_arg(const TaskContext &t, std::size_t i) {
  const Object &o = *t.args.at(i);
  if (kind_of(o) == ObjectKind::Metric)
    return christoffel(std::get<MetricField>(o));
  return std::get<WorldConnection>(o);
}

const LagrangianDensity &lagrangian_arg(const TaskContext &t) { return arg<LagrangianDensity>(t, 0); }

void add_spinor(TaskRecord &rec, const SpinorFieldExpr &psi, const ZeroTestOptions &opts) {
  for (int i = 0; i < 4; ++i) {
    const Expr re = simplified(psi.psi[i].re);
    const Expr im = simplified(psi.psi[i].im);
    if (shown(re, opts))
      rec.components.push_back({"(" + std::to_string(i) + ").re", re});
    if (shown(im, opts))
      rec.components.push_back({"(" + std::to_string(i) + ").im", im});
  }
}

LiftedVectorField lift_of(const TaskContext &t, const BaseVectorField &v) {
  const std::string kind = t.spec.option("lift").value_or("tensor");
  if (kind == "tensor")
    return lift_tensor(v, t.spec.int_option("m", 1), t.spec.int_option("k", 0));
  if (kind == "frame")
    return lift_frame(v);
  if (kind == "connection")
    return lift_connection_bundle(v);
  if (kind == "metric")
    return lift_sigma_c(v);
  if (kind == "horizontal") {
    if (t.args.size() < 3)
      throw MismatchError("horizontal lift needs a connection argument");
    return horizontal_lift(v, connection_arg(t, 2));
  }
  throw MismatchError("unknown lift '" + kind + "'");
}

using K = ObjectKind;

std::map<std::string, OpSignature> build_table() {
  std::map<std::string, OpSignature> t;
  const std::vector<K> conn{K::Connection, K::Metric};

  t["christoffel"] = {{{K::Metric}}, 0, [](const TaskContext &c, TaskRecord &r) {
                        const auto g = christoffel(arg<MetricField>(c, 0));
                        add_components(r, g, c.opts);
                        expect_tensor(c, r, as_tensor(g));
                      }};
  t["curvature"] = {{conn}, 0, [](const TaskContext &c, TaskRecord &r) {
                      const auto R = curvature(connection_arg(c, 0));
                      add_components(r, R, c.opts);
                      expect_tensor(c, r, R);
                    }};
  t["ricci"] = {{conn}, 0, [](const TaskContext &c, TaskRecord &r) {
                  const auto R = ricci(connection_arg(c, 0));
                  const auto &T = c.spec.flag("weighted") ? R.weighted : R.unweighted;
                  add_components(r, T, c.opts);
                  expect_tensor(c, r, T);
                }};
  t["scalar_curvature"] = {{{K::Metric}, {K::Connection}}, 1, [](const TaskContext &c, TaskRecord &r) {
                             const auto &g = arg<MetricField>(c, 0);
                             const auto G = c.args.size() > 1 ? connection_arg(c, 1) : christoffel(g);
                             const Expr s = scalar_curvature(G, g);
                             r.components.push_back({"R", simplified(s)});
                             expect_scalar(c, r, s);
                           }};
  t["torsion"] = {{conn}, 0, [](const TaskContext &c, TaskRecord &r) {
                    const auto T = torsion(connection_arg(c, 0));
                    add_components(r, T, c.opts);
                    expect_tensor(c, r, T);
                  }};
  t["nonmetricity"] = {{conn, {K::Metric}}, 0, [](const TaskContext &c, TaskRecord &r) {
                         const auto C = nonmetricity(connection_arg(c, 0), arg<MetricField>(c, 1));
                         add_components(r, C, c.opts);
                         expect_tensor(c, r, C);
                       }};
  t["contorsion"] = {{conn, {K::Metric}}, 0, [](const TaskContext &c, TaskRecord &r) {
                       const auto S = contorsion(connection_arg(c, 0), arg<MetricField>(c, 1));
                       add_components(r, S, c.opts);
                       expect_tensor(c, r, S);
                     }};
  t["splitting"] = {{conn, {K::Metric}}, 0, [](const TaskContext &c, TaskRecord &r) {
                      const auto G = connection_arg(c, 0);
                      const auto &g = arg<MetricField>(c, 1);
                      const auto back = recompose(decompose(G, g), g);
                      r.checks.push_back({"recompose(decompose(G)) = G", zero_test(back, G, c.opts)});
                    }};
  t["metric_from_tetrad"] = {{{K::Tetrad}}, 0, [](const TaskContext &c, TaskRecord &r) {
                               const auto g = metric_from_tetrad(arg<TetradField>(c, 0));
                               add_components(r, g.lower(), c.opts);
                             }};
  t["lorentz_connection"] = {{conn, {K::Tetrad}}, 0, [](const TaskContext &c, TaskRecord &r) {
                               const auto &h = arg<TetradField>(c, 1);
                               const auto L = lorentz_connection(connection_arg(c, 0), h);
                               add_components(r, L.coefficients, c.opts);
                               r.checks.push_back(
                                   {"metricity of the Lorentz connection",
                                    zero_test(nonmetricity(L.connection, metric_from_tetrad(h)), c.opts)});
                             }};
  t["integrability"] = {{{K::OneForm}}, 0, [](const TaskContext &c, TaskRecord &r) {
                          const auto rep = integrability_check(arg<OneForm>(c, 0).form, c.opts);
                          r.notes.push_back({"integrable", rep.integrable ? "true" : "false"});
                          add_components(r, rep.form, c.opts);
                        }};
  t["bracket"] = {{{K::Vector}, {K::Vector}}, 0, [](const TaskContext &c, TaskRecord &r) {
                    const auto b = bracket(arg<BaseVectorField>(c, 0), arg<BaseVectorField>(c, 1));
                    for (std::size_t i = 0; i < b.components.size(); ++i) {
                      const Expr v = simplified(b.components[i]);
                      if (shown(v, c.opts))
                        r.components.push_back({index_label({static_cast<int>(i)}), v});
                    }
                  }};
  t["lift_bracket"] = {{{K::Vector}, {K::Vector}, {K::Connection, K::Metric}}, 1,
                       [](const TaskContext &c, TaskRecord &r) {
                         const auto &a = arg<BaseVectorField>(c, 0);
                         const auto &b = arg<BaseVectorField>(c, 1);
                         const auto d = bracket(lift_of(c, a), lift_of(c, b)) - lift_of(c, bracket(a, b));
                         r.checks.push_back({"[L(u),L(v)] = L([u,v])", zero_test(d, c.opts)});
                       }};

  const std::vector<std::vector<K>> lag{{K::Lagrangian}};
  t["momentum_identities"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                                add_report(r, momentum_identities(lagrangian_arg(c), c.opts));
                              }};
  t["field_equations"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                            const auto &L = lagrangian_arg(c);
                            if (L.density != hilbert_einstein(L.context).density)
                              throw MismatchError("field_equations needs the builtin hilbert_einstein");
                            add_report(r, field_equations_HE(L.context, c.opts));
                          }};
  t["invariance_identities"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                                  add_report(r, invariance_identities(lagrangian_arg(c), c.opts));
                                }};
  t["current_identities"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                               add_report(r, current_identities(lagrangian_arg(c), c.opts));
                             }};
  t["komar_identities"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                             add_report(r, komar_identities(lagrangian_arg(c), c.spec.flag("classical"), c.opts));
                           }};
  t["noether_identities"] = {lag, 0, [](const TaskContext &c, TaskRecord &r) {
                               add_report(r, noether_identities(lagrangian_arg(c), c.opts));
                             }};
  t["nilpotency"] = {{}, 0, [](const TaskContext &c, TaskRecord &r) {
                       const int dim = c.spec.int_option("dim", 4);
                       if (dim < 2 || dim > 4)
                         throw MismatchError("nilpotency dim must be between 2 and 4");
                       auto ctx = std::make_shared<const JetContext>(dim);
                       const std::string which = c.spec.option("operator").value_or("brst");
                       if (which != "brst" && which != "gauge")
                         throw MismatchError("operator must be brst or gauge");
                       const auto d = which == "brst" ? brst_operator(ctx) : gauge_operator(ctx);
                       std::vector<std::string> gens;
                       if (const auto g = c.spec.option("generators")) {
                         std::string cur;
                         for (char ch : *g + ",") {
                           if (ch == ',' || ch == ' ') {
                             if (!cur.empty())
                               gens.push_back(cur);
                             cur.clear();
                           } else {
                             cur += ch;
                           }
                         }
                       } else {
                         gens = nilpotency_generators(*ctx);
                       }
                       const auto rep = nilpotency_check(d, gens);
                       for (const auto &e : rep.entries) {
                         ZeroVerdict v;
                         if (!e.zero) {
                           v.kind = ZeroKind::Nonzero;
                           std::string w = e.residual.str();
                           if (w.size() > 160)
                             w = w.substr(0, 160) + " ...";
                           v.label = w;
                         }
                         r.checks.push_back({which + "^2(" + e.generator + ")", v});
                       }
                     }};
  t["clifford"] = {{}, 0, [](const TaskContext &, TaskRecord &r) { add_report(r, clifford_check(gamma_basis())); }};
  t["lorentz_algebra"] = {{}, 0, [](const TaskContext &, TaskRecord &r) {
                            add_report(r, lorentz_algebra_check(gamma_basis()));
                          }};
  t["spin_connection"] = {{conn, {K::Tetrad}}, 0, [](const TaskContext &c, TaskRecord &r) {
                            const auto B = spin_connection(connection_arg(c, 0), arg<TetradField>(c, 1));
                            add_components(r, B, c.opts);
                            expect_tensor(c, r, B);
                          }};
  t["dirac"] = {{conn, {K::Tetrad}, {K::Spinor}}, 0, [](const TaskContext &c, TaskRecord &r) {
                  const auto D = dirac_operator(gamma_basis(), connection_arg(c, 0), arg<TetradField>(c, 1),
                                                arg<SpinorFieldExpr>(c, 2));
                  add_spinor(r, D, c.opts);
                  if (const auto e = c.spec.option("expect")) {
                    if (*e != "zero" && *e != "0")
                      throw MismatchError("dirac accepts only expect = zero");
                    SpinorFieldExpr zero{D.chart, {}};
                    for (auto &p : zero.psi)
                      p = {Expr(0), Expr(0)};
                    r.checks.push_back({"components vanish", spinor_difference(D, zero, c.opts)});
                  }
                }};
  t["boost_equivariance"] = {{conn, {K::Tetrad}, {K::Spinor}}, 0, [](const TaskContext &c, TaskRecord &r) {
                               const Rational ch = rational_option(c.spec, "ch", Rational(5, 4));
                               const Rational sh = rational_option(c.spec, "sh", Rational(3, 4));
                               const auto g = gamma_basis();
                               const auto G = connection_arg(c, 0);
                               const auto &h = arg<TetradField>(c, 1);
                               const auto &psi = arg<SpinorFieldExpr>(c, 2);
                               const auto S = boost_spin_matrix(g, ch, sh);
                               const auto lhs = dirac_operator(g, G, boost_tetrad(h, boost01(ch, sh)),
                                                               apply_matrix(S, psi));
                               const auto rhs = apply_matrix(S, dirac_operator(g, G, h, psi));
                               r.checks.push_back({"D_{Lh}(S psi) = S D_h(psi)", spinor_difference(lhs, rhs, c.opts)});
                             }};
  t["rep_square"] = {{{K::Tetrad}, {K::OneForm}}, 0, [](const TaskContext &c, TaskRecord &r) {
                       const auto &w = arg<OneForm>(c, 1).form;
                       std::vector<Expr> comps(w.components().begin(), w.components().end());
                       r.checks.push_back({"rep(t)^2 = g(t,t)", rep_square_check(gamma_basis(), arg<TetradField>(c, 0),
                                                                              comps, c.opts)});
                     }};
  return t;
}

} // namespace

const std::map<std::string, OpSignature> &operation_table() {
  static const auto table = build_table();
  return table;
}

TaskRecord execute(const Scenario::Impl &impl, const TaskSpec &spec, const ZeroTestOptions &opts) {
  TaskRecord rec;
  rec.id = spec.id;
  rec.op = spec.op;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto &sig = operation_table().at(spec.op);
    TaskContext ctx{impl, spec, {}, opts};
    ctx.opts.samples = spec.int_option("samples", opts.samples);
    for (const auto &a : spec.args)
      ctx.args.push_back(&impl.objects.at(a));
    sig.run(ctx, rec);
    if (rec.checks.empty()) {
      rec.status = TaskStatus::Ok;
    } else {
      const bool want_nonzero = spec.option("expect") == std::optional<std::string>("nonzero");
      bool any_nonzero = false;
      bool all_zero = true;
      for (const auto &c : rec.checks) {
        any_nonzero |= !c.verdict.zero();
        all_zero &= c.verdict.zero();
      }
      rec.status = (want_nonzero ? any_nonzero : all_zero) ? TaskStatus::Pass : TaskStatus::Fail;
    }
  } catch (const ParseError &e) {
    rec.status = TaskStatus::Error;
    rec.error = "line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) + ": " + e.what();
  } catch (const std::exception &e) {
    rec.status = TaskStatus::Error;
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Report Scenario::run(const RunOptions &opts) const {
  ZeroTestOptions z;
  z.seed = opts.seed;
  z.samples = opts.samples;
  Report report;
  report.title = "scenario";
  if (opts.serial) {
    for (const auto &t : impl_->tasks)
      report.tasks.push_back(execute(*impl_, t, z));
    return report;
  }
  const std::size_t n = impl_->tasks.size();
  report.tasks.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      report.tasks[i] = execute(*impl_, impl_->tasks[i], z);
  };
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers; ++i)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  return report;
}

} // namespace maf
