#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/lifts.hpp"

#include <functional>
#include <map>
#include <random>

using namespace maf;

namespace {

using Matrix = std::vector<std::vector<Expr>>;

Expr random_poly2(const Chart &c, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> coef(-3, 3), keep(0, 2);
  Expr e = Expr(coef(rng));
  for (int i = 0; i < c.dim(); ++i) {
    e += Expr(coef(rng)) * c.x(i);
    for (int j = i; j < c.dim(); ++j)
      if (keep(rng) == 0)
        e += Expr(make_rational(coef(rng), 2)) * c.x(i) * c.x(j);
  }
  return e;
}

BaseVectorField random_field(const Chart &c, std::mt19937_64 &rng) {
  std::vector<Expr> comps;
  for (int i = 0; i < c.dim(); ++i)
    comps.push_back(random_poly2(c, rng));
  return BaseVectorField(c, comps);
}

// Oracle from the coordinate transformation laws under x' = x + ε τ(x):
// the fiber component of the lift is d/dε of the transformed coordinate at ε = 0.
struct Flow {
  const BaseVectorField &tau;
  Expr eps = Expr::symbol("eps");
  Matrix J;    // ∂x'^a/∂x^b
  Matrix Jinv; // ∂x^a/∂x'^b

  explicit Flow(const BaseVectorField &t) : tau(t) {
    const int n = t.chart.dim();
    J.assign(n, std::vector<Expr>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        J[a][b] = Expr(a == b ? 1 : 0) + eps * diff(t.components[a], t.chart.coordinate(b));
    Jinv = inverse(J);
  }

  Expr second(int a, int m, int b) const {
    const auto &c = tau.chart;
    return eps * diff(diff(tau.components[a], c.coordinate(m)), c.coordinate(b));
  }

  Expr generator(const Expr &transformed) const {
    return substitute(diff(transformed, "eps"), {{"eps", Expr(0)}});
  }
};

std::map<std::string, Expr> components_of(const LiftedVectorField &L) {
  std::map<std::string, Expr> m;
  for (std::size_t i = 0; i < L.fiber.size(); ++i)
    m[L.fiber[i]] = L.fiber_components[i];
  return m;
}

void check_against(const LiftedVectorField &L, const std::map<std::string, Expr> &oracle) {
  const auto lib = components_of(L);
  CHECK(lib.size() == oracle.size());
  for (const auto &[name, expected] : oracle) {
    REQUIRE_MESSAGE(lib.count(name), name);
    CHECK_MESSAGE(is_zero(lib.at(name) - expected).kind == ZeroKind::ProvenZero, name);
  }
}

BaseVectorField quadratic_tau(const Chart &c) {
  return BaseVectorField(c, {c.parse("x0*x1 + x2^2"), c.parse("1 - x0^2/2"), c.parse("3*x1*x2 - x0")});
}

void for_each_index(int n, int rank, const std::function<void(const std::vector<int> &)> &f) {
  std::vector<int> idx(rank, 0);
  while (true) {
    f(idx);
    int i = rank - 1;
    while (i >= 0 && ++idx[i] == n)
      idx[i--] = 0;
    if (i < 0)
      return;
  }
}

} // namespace

TEST_CASE("connection-bundle lift matches the transformation law") {
  const Chart c(3);
  const BaseVectorField tau = quadratic_tau(c);
  const Flow F(tau);
  const int n = 3;
  auto k = [](int m, int a, int b) { return Expr::symbol(connection_coordinate(m, a, b)); };
  std::map<std::string, Expr> oracle;
  for (int l = 0; l < n; ++l)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al) {
        Expr s;
        for (int m = 0; m < n; ++m)
          for (int be = 0; be < n; ++be) {
            Expr inner = F.second(nu, m, be);
            for (int g = 0; g < n; ++g)
              inner += F.J[nu][g] * k(m, g, be);
            s += inner * F.Jinv[be][al] * F.Jinv[m][l];
          }
        oracle[connection_coordinate(l, nu, al)] = F.generator(s);
      }
  check_against(lift_connection_bundle(tau), oracle);
}

TEST_CASE("metric and connection lift matches the transformation law") {
  const Chart c(3);
  const BaseVectorField tau = quadratic_tau(c);
  const Flow F(tau);
  const LiftedVectorField L = lift_sigma_c(tau);
  const auto lib = components_of(L);
  auto s = [](int a, int b) { return Expr::symbol(metric_coordinate(a, b)); };
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      Expr t;
      for (int m = 0; m < 3; ++m)
        for (int nn = 0; nn < 3; ++nn)
          t += F.J[a][m] * F.J[b][nn] * s(m, nn);
      CHECK(is_zero(lib.at(metric_coordinate(a, b)) - F.generator(t)).kind == ZeroKind::ProvenZero);
    }
  CHECK(lib.count(connection_coordinate(2, 1, 0)) == 1);
}

TEST_CASE("frame and tensor lifts match the transformation law") {
  const Chart c(3);
  const BaseVectorField tau = quadratic_tau(c);
  const Flow F(tau);
  std::map<std::string, Expr> frame;
  for (int m = 0; m < 3; ++m)
    for (int a = 0; a < 3; ++a) {
      Expr t;
      for (int l = 0; l < 3; ++l)
        t += F.J[m][l] * Expr::symbol(frame_coordinate(l, a));
      frame[frame_coordinate(m, a)] = F.generator(t);
    }
  check_against(lift_frame(tau), frame);

  for (auto [mu, ku] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}}) {
    std::map<std::string, Expr> oracle;
    for_each_index(3, mu + ku, [&](const std::vector<int> &idx) {
      const std::vector<int> up(idx.begin(), idx.begin() + mu), lo(idx.begin() + mu, idx.end());
      Expr t;
      for_each_index(3, mu + ku, [&](const std::vector<int> &src) {
        Expr f = Expr::symbol(tensor_coordinate({src.begin(), src.begin() + mu},
                                                {src.begin() + mu, src.end()}));
        for (int i = 0; i < mu; ++i)
          f = f * F.J[up[i]][src[i]];
        for (int j = 0; j < ku; ++j)
          f = f * F.Jinv[src[mu + j]][lo[j]];
        t += f;
      });
      oracle[tensor_coordinate(up, lo)] = F.generator(t);
    });
    check_against(lift_tensor(tau, mu, ku), oracle);
  }
}

TEST_CASE("property: lifts are functorial") {
  std::mt19937_64 rng(41);
  const std::vector<std::pair<std::string, std::function<LiftedVectorField(const BaseVectorField &)>>>
      kinds{{"tensor(1,1)", [](const BaseVectorField &t) { return lift_tensor(t, 1, 1); }},
            {"tensor(0,2)", [](const BaseVectorField &t) { return lift_tensor(t, 0, 2); }},
            {"frame", lift_frame},
            {"connection", lift_connection_bundle},
            {"metric", lift_sigma_c}};
  for (const auto &[name, lift] : kinds)
    for (int i = 0; i < 20; ++i) {
      const Chart c(2 + i % 2);
      const BaseVectorField a = random_field(c, rng), b = random_field(c, rng);
      const auto v = zero_test(bracket(lift(a), lift(b)) - lift(bracket(a, b)));
      CHECK_MESSAGE(v.kind == ZeroKind::ProvenZero, name << " pair " << i);
    }
}

TEST_CASE("bracket of base fields") {
  const Chart c(2);
  const BaseVectorField a(c, {Expr(1), Expr(0)}), b(c, {Expr(0), c.x(0)});
  const BaseVectorField ab = bracket(a, b);
  CHECK(ab.components[0].is_zero());
  CHECK(ab.components[1] == Expr(1));
  std::mt19937_64 rng(3);
  const BaseVectorField u = random_field(c, rng), w = random_field(c, rng);
  const BaseVectorField s = bracket(u, w) + bracket(w, u);
  for (const auto &e : s.components)
    CHECK(e.is_zero());
}

TEST_CASE("lifted fields act as derivations") {
  const Chart c(2);
  const BaseVectorField tau(c, {c.x(1), Expr(0)});
  const LiftedVectorField L = lift_tensor(tau, 1, 0);
  const Expr y0 = Expr::symbol(tensor_coordinate({0}, {}));
  const Expr y1 = Expr::symbol(tensor_coordinate({1}, {}));
  // δẋ^0 = ∂_1τ^0 ẋ^1 = ẋ^1
  CHECK(L.apply(y0) == y1);
  CHECK(L.apply(y1).is_zero());
  CHECK(L.apply(c.x(0)) == c.x(1));
  CHECK_THROWS_AS(bracket(lift_frame(tau), lift_connection_bundle(tau)), MismatchError);
}

TEST_CASE("horizontal lifts: flat connections commute, curved ones leave a witness") {
  const Chart c(2);
  const HorizontalDefect flat = horizontal_defect(WorldConnection(c));
  CHECK_FALSE(flat.found);
  const MetricField g =
      MetricField::diagonal(c, {Expr(1), c.parse("1 + x0^2")}, Signature::Riemannian);
  const HorizontalDefect curved = horizontal_defect(christoffel(g));
  REQUIRE(curved.found);
  CHECK(curved.verdict.kind == ZeroKind::Nonzero);
  const WorldConnection G = christoffel(g);
  const auto v = zero_test(bracket(horizontal_lift(curved.tau, G), horizontal_lift(curved.tau_prime, G)) -
                           horizontal_lift(bracket(curved.tau, curved.tau_prime), G));
  CHECK(v.kind == ZeroKind::Nonzero);
}
