#include "internal.hpp"

#include <chrono>

namespace maf {

namespace {

constexpr const char *kSuite = R"(
[chart]
dim = 3

[metric g]
signature = lorentzian
diag = 2 + x1^2; -1 - x0^2; -3
(0,1) = x2/5
(1,2) = x0*x1/7

[connection G]
(0,0,1) = x2
(0,1,2) = 1/3 - x0
(1,2,0) = x1*x2
(2,0,0) = 2/5
(2,1,1) = x0^2
(1,0,2) = -x2/4

[lagrangian L]
dim = 2
builtin = hilbert_einstein

[task splitting]
op = splitting
args = G, g

[task momenta]
op = momentum_identities
args = L

[task noether]
op = noether_identities
args = L

[task brst]
op = nilpotency
dim = 4
operator = brst
)";

} // namespace

Report selfcheck(const SelfcheckOptions &opts) {
  RunOptions run = opts.run;
  run.serial = true;
  Report report = Scenario::parse(kSuite).run(run);
  report.title = "selfcheck";

  TaskRecord rec;
  rec.id = "clifford";
  rec.op = "clifford";
  const auto start = std::chrono::steady_clock::now();
  GammaRep g = gamma_basis();
  if (opts.tamper_gamma)
    g.gamma[2][0][3] = g.gamma[2][0][3] + Gaussian{Rational(1), Rational(0)};
  for (const auto &c : clifford_check(g).checks)
    rec.checks.push_back({c.name, c.verdict});
  for (const auto &c : lorentz_algebra_check(g).checks)
    rec.checks.push_back({c.name, c.verdict});
  bool ok = true;
  for (const auto &c : rec.checks)
    ok &= c.verdict.zero();
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.tasks.push_back(std::move(rec));
  return report;
}

} // namespace maf
