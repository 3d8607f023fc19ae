#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/scenario.hpp"

#include <string>

using namespace maf;

namespace {

constexpr const char *kFlat4 = R"(
[chart]
dim = 4

[metric eta]
signature = lorentzian
diag = 1; -1; -1; -1

[tetrad h]
(0,0) = 1
(1,1) = 1 + x0^2
(2,2) = 1
(2,3) = x3
(3,3) = 2

[connection G]
(0,1,2) = x3
(1,0,0) = x0*x1

[spinor psi]
re = x0*x1; x3^2; 1 + x1; x1*x2
im = x2; 0; x0*x3; x0

[oneform w]
components = x1; 1; x0 - x3; 1/2

[vector u]
components = x1; 0; x0^2; 1

[vector v]
components = 0; x2; 1; x0*x3

[task flat]
op = christoffel
args = eta
expect = zero

[task split]
op = splitting
args = G, eta

[task tetrad_metric]
op = metric_from_tetrad
args = h

[task lorentz]
op = lorentz_connection
args = G, h

[task spin]
op = spin_connection
args = G, h

[task dirac]
op = dirac
args = G, h, psi

[task boost]
op = boost_equivariance
args = G, h, psi
ch = 5/4
sh = 3/4

[task square]
op = rep_square
args = h, w

[task clifford]
op = clifford

[task algebra]
op = lorentz_algebra

[task br]
op = bracket
args = u, v

[task lifts]
op = lift_bracket
args = u, v
lift = connection

[task horizontal]
op = lift_bracket
args = u, v, G
lift = horizontal
)";

constexpr const char *kJets = R"(
[lagrangian HE]
dim = 2
builtin = hilbert_einstein

[lagrangian YM]
dim = 2
builtin = yang_mills

[task fe]
op = field_equations
args = HE

[task mom]
op = momentum_identities
args = YM

[task inv]
op = invariance_identities
args = HE

[task cur]
op = current_identities
args = HE

[task komar]
op = komar_identities
args = HE
classical = true

[task noether]
op = noether_identities
args = YM

[task u2]
op = nilpotency
dim = 2
operator = gauge
generators = s00, k000
)";

void expect_parse_error(const std::string &text, std::size_t line, const std::string &needle) {
  try {
    (void)Scenario::parse(text);
    FAIL("expected a parse error for: " << text);
  } catch (const ParseError &e) {
    CHECK_MESSAGE(e.line() == line, e.what());
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    CHECK(e.column() >= 1);
  }
}

const TaskRecord &task(const Report &r, const std::string &id) {
  for (const auto &t : r.tasks)
    if (t.id == id)
      return t;
  FAIL("no task " << id);
  throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("geometry, lift and spinor tasks") {
  const Scenario s = Scenario::parse(kFlat4);
  CHECK(s.task_count() == 13);
  const Report r = s.run();
  CHECK(task(r, "flat").status == TaskStatus::Pass);
  CHECK(task(r, "split").status == TaskStatus::Pass);
  CHECK(task(r, "tetrad_metric").status == TaskStatus::Ok);
  CHECK_FALSE(task(r, "tetrad_metric").components.empty());
  CHECK(task(r, "lorentz").status != TaskStatus::Error);
  CHECK(task(r, "dirac").status == TaskStatus::Ok);
  CHECK(task(r, "boost").status == TaskStatus::Pass);
  CHECK(task(r, "square").status == TaskStatus::Pass);
  CHECK(task(r, "clifford").status == TaskStatus::Pass);
  CHECK(task(r, "algebra").status == TaskStatus::Pass);
  CHECK(task(r, "lifts").status == TaskStatus::Pass);
  // Horizontal lifts along a curved connection are not functorial.
  CHECK(task(r, "horizontal").status == TaskStatus::Fail);
  CHECK(r.exit_code() == 1);
}

TEST_CASE("variational and BRST tasks") {
  const Report r = Scenario::parse(kJets).run();
  for (const char *id : {"fe", "mom", "inv", "cur", "komar", "noether"})
    CHECK_MESSAGE(task(r, id).status == TaskStatus::Pass, id);
  const TaskRecord &u2 = task(r, "u2");
  CHECK(u2.status == TaskStatus::Fail);
  CHECK(r.exit_code() == 1);
}

TEST_CASE("failed expectations, errors and exit codes") {
  const Report fail = Scenario::parse(R"(
[chart]
coords = th ph
[metric g]
signature = riemannian
diag = 1; sin(th)^2
[task R]
op = scalar_curvature
args = g
expect = 2
)")
                          .run();
  CHECK(fail.tasks[0].status == TaskStatus::Fail);
  CHECK(fail.exit_code() == 1);

  const Report err = Scenario::parse(R"(
[lagrangian L]
dim = 2
density = k000^2
[task bad]
op = field_equations
args = L
[task fine]
op = clifford
)")
                         .run();
  CHECK(err.tasks[0].status == TaskStatus::Error);
  CHECK_FALSE(err.tasks[0].error.empty());
  CHECK(err.tasks[1].status == TaskStatus::Pass);
  CHECK(err.exit_code() == 2);
}

TEST_CASE("parse errors carry line numbers") {
  expect_parse_error("[chart]\ndim = 2\n[task t]\nop = frobnicate\n", 4, "frobnicate");
  expect_parse_error("[chart]\ndim = 2\n[metric g]\ndiag = 1; 1\nsignature = riemannian\n[task t]\nop = torsion\nargs = g, g, g\n",
                     8, "arg");
  expect_parse_error("[chart]\ndim = 2\n[task t]\nop = christoffel\nargs = nothing\n", 5, "nothing");
  expect_parse_error("[chart]\ndim = 2\n[metric g]\nsignature = riemannian\ndiag = 1; x0 +\n", 5, "");
  expect_parse_error("[chart]\ndim = 2\nthis line has no equals sign\n", 3, "");
  expect_parse_error("[chart]\ndim = 2\n[vector u]\ncomponents = 1; 0\n[task t]\nop = christoffel\nargs = u\n", 7,
                     "");
}

TEST_CASE("empty scenario and deterministic reports") {
  const Report empty = Scenario::parse("# nothing here\n").run();
  CHECK(empty.tasks.empty());
  CHECK(empty.exit_code() == 0);

  const Scenario s = Scenario::parse(kFlat4);
  RunOptions serial;
  serial.serial = true;
  const Report a = s.run(), b = s.run(serial);
  CHECK(a.json() == b.json());
  CHECK(a.text() == b.text());
  CHECK(a.text().find("seconds") == std::string::npos);
}

TEST_CASE("selfcheck passes and the gamma hook is detected") {
  CHECK(selfcheck().exit_code() == 0);
  SelfcheckOptions o;
  o.tamper_gamma = true;
  const Report r = selfcheck(o);
  CHECK(r.exit_code() == 1);
  CHECK(r.tasks.back().status == TaskStatus::Fail);
}
