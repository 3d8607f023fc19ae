#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/variational.hpp"

#include "komar_oracle.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace maf;

namespace {

std::shared_ptr<const JetContext> ctx(int dim) { return std::make_shared<const JetContext>(dim, 4); }

void require_proven(const IdentityReport &r) {
  for (const auto &c : r.checks)
    CHECK_MESSAGE(c.verdict.kind == ZeroKind::ProvenZero,
                  r.title << ": " << c.name << " " << zero_kind_name(c.verdict.kind) << " "
                          << c.verdict.label);
}

void require_zero(const IdentityReport &r) {
  for (const auto &c : r.checks)
    CHECK_MESSAGE(c.verdict.zero(), r.title << ": " << c.name << " " << c.verdict.label);
}

} // namespace

TEST_CASE("euler_lagrange on hand-computed densities") {
  auto c = ctx(2);
  const LagrangianDensity L = parse_lagrangian(c, "k000_d1 * s00");
  const VariationalDerivatives E = euler_lagrange(L);
  CHECK(E.E_sigma(0, 0) == c->k(0, 0, 0, {1}));
  CHECK(E.E_k(0, 0, 0) == -c->sigma(0, 0, {1}));
  CHECK(E.E_k(1, 0, 0).is_zero());

  const VariationalDerivatives off = euler_lagrange(parse_lagrangian(c, "s01"));
  CHECK(off.E_sigma(0, 1) == Expr(make_rational(1, 2)));
  CHECK(off.E_sigma(1, 0) == Expr(make_rational(1, 2)));

  const auto pi = momenta(L);
  // π^{λμ}_α^β at (1, 0, 0, 0)
  CHECK(pi[((1 * 2 + 0) * 2 + 0) * 2 + 0] == c->sigma(0, 0));
}

TEST_CASE("property: total divergences are variationally trivial") {
  auto c = ctx(2);
  std::mt19937_64 rng(13);
  const VarTable v = c->vars(0);
  const std::vector<std::string> pool{"s00", "s01", "s11", "k000", "k101", "k011", "k110"};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1), coef(-3, 3);
  for (int i = 0; i < 8; ++i) {
    Expr f;
    for (int t = 0; t < 3; ++t)
      f += Expr(coef(rng)) * Expr::symbol(pool[pick(rng)]) * Expr::symbol(pool[pick(rng)]) *
           Expr::symbol(pool[pick(rng)]);
    const Expr g = Expr(coef(rng)) * Expr::symbol(pool[pick(rng)]) * Expr::symbol(pool[pick(rng)]);
    LagrangianDensity L{c, c->total_derivative(f, 0) + c->total_derivative(g, 1), "divergence"};
    const VariationalDerivatives E = euler_lagrange(L);
    for (const auto &e : E.sigma)
      CHECK(is_zero(e).kind == ZeroKind::ProvenZero);
    for (const auto &e : E.k)
      CHECK(is_zero(e).kind == ZeroKind::ProvenZero);
  }
}

TEST_CASE("Hilbert-Einstein field equations in dim 2 are proven") {
  require_proven(field_equations_HE(ctx(2), ctx(2)->zero_options()));
}

TEST_CASE("gauge identities of Hilbert-Einstein and Yang-Mills in dim 2") {
  auto c = ctx(2);
  const ZeroTestOptions o = c->zero_options();
  for (const auto &L : {hilbert_einstein(c), yang_mills(c)}) {
    require_proven(momentum_identities(L, o));
    require_proven(invariance_identities(L, o));
    require_proven(noether_identities(L, o));
    require_proven(current_identities(L, o));
    const IdentityReport k = komar_identities(L, false, o);
    REQUIRE(!k.checks.empty());
    CHECK(k.checks[0].verdict.kind == ZeroKind::ProvenZero);
    require_zero(k);
  }
}

TEST_CASE("a Lagrangian that is not covariant breaks the Noether identities") {
  auto c = ctx(2);
  const LagrangianDensity L = parse_lagrangian(c, "k000^2", "broken");
  const IdentityReport r = noether_identities(L, c->zero_options());
  CHECK_FALSE(r.passed());
  bool witnessed = false;
  for (const auto &chk : r.checks)
    if (chk.verdict.kind == ZeroKind::Nonzero) {
      witnessed = true;
      CHECK_FALSE(chk.verdict.witness.empty());
    }
  CHECK(witnessed);
}

TEST_CASE("Komar superpotential on the Levi-Civita connection matches the classical formula") {
  const int n = 3;
  auto c = ctx(n);
  const LagrangianDensity L = hilbert_einstein(c);
  const std::vector<Expr> U = komar_superpotential(L);

  const maf_test::KomarOracle oracle{n,
                                     [](const Eigen::VectorXd &x) {
                                       Eigen::MatrixXd g(3, 3);
                                       g << 1 + x[1] * x[1] / 5, x[2] / 7, 0,           //
                                           x[2] / 7, -1 - x[0] * x[0] / 3, x[0] * x[1] / 9, //
                                           0, x[0] * x[1] / 9, -2 + x[2] / 4;
                                       return g;
                                     },
                                     [](const Eigen::VectorXd &x) {
                                       Eigen::VectorXd t(3);
                                       t << x[0] * x[1] + 1, x[2] * x[2] - x[0] / 2, std::sin(x[1]) + x[0] * x[2];
                                       return t;
                                     }};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(3);
    x << u(rng), u(rng), u(rng);
    for (const auto &[lib, ref] : oracle.compare(*c, U, x))
      CHECK_MESSAGE(std::abs(lib - ref) <= 1e-6 * std::max(1.0, std::abs(ref)),
                    "lib " << lib << " classical " << ref);
  }
}

TEST_CASE("jet bookkeeping and errors") {
  auto c = ctx(2);
  CHECK(c->sigma(1, 0).name() == "s01");
  CHECK(c->sigma(0, 1, {1, 0}).name() == "s01_d01");
  CHECK(c->k(1, 0, 1, {0}).name() == "k101_d0");
  CHECK(c->tau(1, {0, 0}).name() == "t1_d00");
  CHECK(c->total_derivative(c->sigma(0, 0), 1) == c->sigma(0, 0, {1}));
  CHECK(c->total_derivative(c->k(0, 0, 0), {0, 1}) == c->k(0, 0, 0, {0, 1}));
  JetContext shallow(2, 1);
  CHECK_THROWS_AS(shallow.total_derivative(shallow.sigma(0, 0, {1}), 0), JetOrderError);
  CHECK_THROWS_AS(parse_lagrangian(c, "s00 * q"), UnknownIdentifierError);
  const LagrangianDensity second{c, c->k(0, 0, 0, {0, 1}), "second"};
  CHECK_THROWS_AS(second.validate(), MismatchError);
}
