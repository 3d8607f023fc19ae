#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/geometry.hpp"

#include "fd_curvature.hpp"

#include <cmath>
#include <random>

using namespace maf;
using maf_test::FdCurvature;

namespace {

Chart schwarzschild_chart() { return Chart({"t", "r", "th", "ph"}, {"M"}); }

MetricField schwarzschild() {
  const Chart c = schwarzschild_chart();
  const Expr f = c.parse("1 - 2*M/r");
  return MetricField::diagonal(c, {f, Expr(-1) / f, c.parse("-r^2"), c.parse("-r^2*sin(th)^2")},
                               Signature::Lorentzian);
}

MetricField sphere() {
  const Chart c({"th", "ph"}, {});
  return MetricField::diagonal(c, {Expr(1), c.parse("sin(th)^2")}, Signature::Riemannian);
}

void compare_curvature(const MetricField &g, const std::vector<FloatPoint> &points) {
  const TensorField R = curvature(christoffel(g));
  const FdCurvature oracle(g);
  const int n = g.dim();
  for (const auto &p : points)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const double lib = evaluate_float(R({l, m, a, b}), p);
            const double ref = -oracle.riemann(p, a, b, l, m);
            CHECK_MESSAGE(std::abs(lib - ref) <= 1e-6 * std::max(1.0, std::abs(ref)),
                          "R_{" << l << m << "}^" << a << "_" << b << " lib " << lib << " oracle "
                                << ref);
          }
}

Expr random_linear(const Chart &c, std::mt19937_64 &rng, int scale) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Expr e = Expr(make_rational(coef(rng), scale));
  for (int i = 0; i < c.dim(); ++i)
    e += Expr(make_rational(coef(rng), scale)) * c.x(i);
  return e;
}

Expr random_quadratic(const Chart &c, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  Expr e = random_linear(c, rng, 2);
  for (int i = 0; i < c.dim(); ++i)
    for (int j = i; j < c.dim(); ++j)
      e += Expr(make_rational(coef(rng), 4)) * c.x(i) * c.x(j);
  return e;
}

MetricField perturbed_eta(const Chart &c, std::mt19937_64 &rng) {
  const int n = c.dim();
  std::vector<Expr> comps(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr e = Expr(eta(i, j)) + random_linear(c, rng, 90);
      comps[i * n + j] = e;
      comps[j * n + i] = e;
    }
  return MetricField(TensorField(c, "dd", comps), Signature::Lorentzian);
}

WorldConnection random_connection(const Chart &c, std::mt19937_64 &rng) {
  std::vector<Expr> comps;
  for (int i = 0; i < c.dim() * c.dim() * c.dim(); ++i)
    comps.push_back(random_quadratic(c, rng));
  return WorldConnection(c, comps);
}

} // namespace

TEST_CASE("christoffel matches an independent formula on diag(1, x0^2)") {
  const Chart c(2);
  const MetricField g = MetricField::diagonal(c, {Expr(1), c.parse("x0^2")}, Signature::Riemannian);
  const WorldConnection G = christoffel(g);
  // Textbook: Γ^0_{11} = −x0, Γ^1_{01} = Γ^1_{10} = 1/x0; ours carry the opposite sign.
  CHECK(G(1, 0, 1) == c.parse("x0"));
  CHECK(G(0, 1, 1) == c.parse("-1/x0"));
  CHECK(G(1, 1, 0) == c.parse("-1/x0"));
  CHECK(G(0, 0, 0).is_zero());
  CHECK(G(0, 0, 1).is_zero());
  CHECK(G(1, 1, 1).is_zero());
  CHECK(zero_test(torsion(G)).zero());
  CHECK(zero_test(nonmetricity(G, g)).kind == ZeroKind::ProvenZero);
  CHECK(zero_test(curvature(G)).kind == ZeroKind::ProvenZero);
}

TEST_CASE("curvature agrees with a finite-difference oracle: 2-sphere") {
  const MetricField g = sphere();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.3, 2.8), ph(-3.0, 3.0);
  std::vector<FloatPoint> pts;
  for (int i = 0; i < 5; ++i)
    pts.push_back({{"th", th(rng)}, {"ph", ph(rng)}});
  compare_curvature(g, pts);
  const Expr R = scalar_curvature(christoffel(g), g);
  const auto v = is_zero(R + Expr(2));
  CHECK(v.zero());
}

TEST_CASE("curvature agrees with a finite-difference oracle: Schwarzschild") {
  const MetricField g = schwarzschild();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> r(3.0, 9.0), th(0.4, 2.7), u(-2.0, 2.0), m(0.2, 1.2);
  std::vector<FloatPoint> pts;
  for (int i = 0; i < 5; ++i)
    pts.push_back({{"t", u(rng)}, {"r", r(rng)}, {"th", th(rng)}, {"ph", u(rng)}, {"M", m(rng)}});
  compare_curvature(g, pts);
  const WorldConnection G = christoffel(g);
  CHECK(zero_test(ricci(G).unweighted).zero());
  CHECK(zero_test(nonmetricity(G, g)).zero());
}

TEST_CASE("property: Levi-Civita connections are torsion free and metric") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 4; ++n) {
    const Chart c(n);
    for (int k = 0; k < 2; ++k) {
      const MetricField g = perturbed_eta(c, rng);
      const WorldConnection G = christoffel(g);
      CHECK(zero_test(torsion(G)).kind == ZeroKind::ProvenZero);
      CHECK(zero_test(nonmetricity(G, g)).kind == ZeroKind::ProvenZero);
    }
  }
  const Chart c(3);
  const MetricField ex = MetricField::diagonal(
      c, {c.parse("exp(2*x1)"), c.parse("-exp(x0)"), c.parse("-1 - x0^2")}, Signature::Lorentzian);
  const auto v = zero_test(nonmetricity(christoffel(ex), ex));
  CHECK(v.zero());
  const MetricField tr = MetricField::diagonal(
      c, {c.parse("2 + sin(x1)"), c.parse("-1 - cos(x0)^2"), c.parse("-exp(x0*x2)")},
      Signature::Lorentzian);
  CHECK(zero_test(torsion(christoffel(tr))).zero());
  CHECK(zero_test(nonmetricity(christoffel(tr), tr)).zero());
}

TEST_CASE("property: splitting recomposes exactly") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 6; ++i) {
    const Chart c(2 + i % 3);
    const MetricField g = perturbed_eta(c, rng);
    const WorldConnection G = random_connection(c, rng);
    const ConnectionSplitting parts = decompose(G, g);
    CHECK(zero_test(recompose(parts, g), G).kind == ZeroKind::ProvenZero);
    CHECK(zero_test(recompose_lowered(parts) - lower_connection(G, g)).kind ==
          ZeroKind::ProvenZero);
  }
}

TEST_CASE("lowering and raising a connection are inverse") {
  std::mt19937_64 rng(29);
  const Chart c(3);
  const MetricField g = perturbed_eta(c, rng);
  const WorldConnection G = random_connection(c, rng);
  CHECK(zero_test(raise_connection(lower_connection(G, g), g), G).kind == ZeroKind::ProvenZero);
}

TEST_CASE("metric connection with prescribed torsion") {
  const Chart c(3);
  const MetricField g =
      MetricField::diagonal(c, {Expr(1), c.parse("-1 - x0^2"), Expr(-1)}, Signature::Lorentzian);
  TensorField T(c, "dud");
  T.set({0, 2, 1}, c.parse("x1"));
  T.set({1, 2, 0}, c.parse("-x1"));
  T.set({1, 0, 2}, c.parse("x2/3"));
  T.set({2, 0, 1}, c.parse("-x2/3"));
  const WorldConnection G = metric_connection(g, T);
  CHECK(zero_test(nonmetricity(G, g)).kind == ZeroKind::ProvenZero);
  CHECK(zero_test(torsion(G) - T).kind == ZeroKind::ProvenZero);
  TensorField bad(c, "dud");
  bad.set({0, 1, 2}, Expr(1));
  CHECK_THROWS_AS(metric_connection(g, bad), SymmetryError);
}

TEST_CASE("tetrads: induced metric and Lorentz connection round trip") {
  const Chart c(4);
  const TetradField h(c, {{c.parse("1 + x1/2"), Expr(0), Expr(0), Expr(0)},
                          {Expr(0), c.parse("2"), c.parse("x0"), Expr(0)},
                          {Expr(0), Expr(0), Expr(1), Expr(0)},
                          {c.parse("x2/3"), Expr(0), Expr(0), c.parse("1 + x3^2")}});
  const MetricField g = metric_from_tetrad(h);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      Expr s;
      for (int a = 0; a < 4; ++a)
        s += Expr(eta(a, a)) * h.coframe(a, m) * h.coframe(a, n);
      CHECK(is_zero(g.g(m, n) - s).kind == ZeroKind::ProvenZero);
    }
  for (int m = 0; m < 4; ++m)
    for (int a = 0; a < 4; ++a) {
      Expr s;
      for (int b = 0; b < 4; ++b)
        s += h.frame(m, b) * h.coframe(b, a);
      CHECK(is_zero(s - Expr(m == a ? 1 : 0)).kind == ZeroKind::ProvenZero);
    }
  const MetricField gr = riemannian_from_tetrad(h);
  CHECK(gr.signature() == Signature::Riemannian);

  TensorField T(c, "dud");
  T.set({0, 1, 2}, c.parse("x3"));
  T.set({2, 1, 0}, c.parse("-x3"));
  T.set({1, 3, 3}, c.parse("1/2 - x0"));
  T.set({3, 3, 1}, c.parse("x0 - 1/2"));
  const WorldConnection G = metric_connection(g, T);
  const LorentzConnection L = lorentz_connection(G, h);
  CHECK(zero_test(L.connection, G).zero());
  CHECK(zero_test(connection_from_lorentz(L.coefficients, h), G).zero());
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(is_zero(L.coefficients({l, a, b}) + L.coefficients({l, b, a})).zero());
}

TEST_CASE("integrability of h0 via the exterior derivative") {
  const Chart c(3);
  TensorField closed(c, "d", {c.parse("x1"), c.parse("x0"), Expr(0)});
  CHECK(integrability_check(closed).integrable);
  TensorField twisted(c, "d", {Expr(1), Expr(0), c.parse("x1")});
  const IntegrabilityReport r = integrability_check(twisted);
  CHECK_FALSE(r.integrable);
  CHECK(r.form({0, 1, 2}) == Expr(1));
  CHECK(r.form({1, 0, 2}) == Expr(-1));
  CHECK(r.form({2, 0, 1}) == Expr(1));
  CHECK(r.verdict.kind == ZeroKind::Nonzero);
}

TEST_CASE("spacetime metric from a one-form and a riemannian metric") {
  const Chart c(3);
  const MetricField gR = MetricField::euclidean(c);
  TensorField sigma(c, "d", {c.parse("1 + x1^2"), Expr(0), Expr(0)});
  const SpacetimeStructure s = spacetime_metric(sigma, gR);
  CHECK(s.g.signature() == Signature::Lorentzian);
  // h0 = dx0, g = 2 dx0⊗dx0 − δ.
  CHECK(is_zero(s.h0({0}) - Expr(1)).zero());
  CHECK(is_zero(s.g.g(0, 0) - Expr(1)).zero());
  CHECK(is_zero(s.g.g(1, 1) + Expr(1)).zero());
  CHECK(is_zero(s.g.g(0, 1)).zero());
  TensorField vanishing(c, "d", {c.x(0), c.x(1), c.x(2)});
  CHECK_THROWS_AS(spacetime_metric(vanishing, gR), DomainError);
}

TEST_CASE("construction errors") {
  const Chart c(2);
  CHECK_THROWS_AS(MetricField::diagonal(c, {Expr(1), Expr(0)}, Signature::Riemannian),
                  SingularError);
  CHECK_THROWS_AS(MetricField::diagonal(c, {Expr(1), Expr(1)}, Signature::Lorentzian),
                  MismatchError);
  CHECK_THROWS_AS(TensorField(c, "dd", {Expr(1), Expr(2), Expr(3), Expr(4)},
                              {{0, 1, Symmetry::Symmetric}}),
                  SymmetryError);
  CHECK_THROWS_AS(TensorField(c, "dd", {Expr(1)}), MismatchError);
}

TEST_CASE("textbook conversion and Cartan connection") {
  const MetricField g = sphere();
  const WorldConnection G = christoffel(g);
  const WorldConnection T = to_textbook(G);
  CHECK(T(0, 1, 1) == -G(0, 1, 1));
  const TensorField R = curvature(G);
  CHECK(curvature_to_textbook(R)({0, 1, 0, 1}) == -R({0, 1, 0, 1}));
  const AffineWorldConnection A = cartan_connection(G);
  CHECK(A.soldering({0, 0}) == Expr(1));
  CHECK(A.soldering({0, 1}).is_zero());
}
