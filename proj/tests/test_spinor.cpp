#include <doctest.h>

#include "metaffine/error.hpp"
#include "metaffine/spinor.hpp"

using namespace maf;

namespace {

Gaussian G(long re, long im = 0) { return {Rational(re), Rational(im)}; }

// Dirac basis built from the Pauli matrices.
std::array<CMatrix, 4> pauli_dirac() {
  const std::array<std::array<std::array<Gaussian, 2>, 2>, 3> pauli{{
      {{{G(0), G(1)}, {G(1), G(0)}}},
      {{{G(0), G(0, -1)}, {G(0, 1), G(0)}}},
      {{{G(1), G(0)}, {G(0), G(-1)}}},
  }};
  std::array<CMatrix, 4> g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g[0][i][j] = G(i == j ? (i < 2 ? 1 : -1) : 0);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        g[k + 1][i][j + 2] = pauli[k][i][j];
        g[k + 1][i + 2][j] = G(0) - pauli[k][i][j];
      }
  return g;
}

Chart chart4() { return Chart(4); }

TetradField sample_tetrad(const Chart &c) {
  return TetradField(c, {{c.parse("1"), Expr(0), c.parse("x1"), Expr(0)},
                         {Expr(0), c.parse("1 + x0^2"), Expr(0), Expr(0)},
                         {Expr(0), Expr(0), Expr(1), c.parse("x3")},
                         {c.parse("x2"), Expr(0), Expr(0), Expr(2)}});
}

WorldConnection sample_connection(const Chart &c) {
  WorldConnection W(c);
  W.set(0, 1, 2, c.parse("x3"));
  W.set(1, 0, 0, c.parse("x0*x1"));
  W.set(2, 3, 1, c.parse("1/2"));
  W.set(3, 2, 2, c.parse("x1 - x2"));
  return W;
}

SpinorFieldExpr sample_spinor(const Chart &c) {
  SpinorFieldExpr psi{c, {}};
  psi.psi[0] = {c.parse("x0*x1"), c.parse("x2")};
  psi.psi[1] = {c.parse("x3^2"), Expr(0)};
  psi.psi[2] = {c.parse("1 + x1"), c.parse("x0*x3")};
  psi.psi[3] = {c.parse("x2*x1"), c.parse("x0")};
  return psi;
}

// S = N(𝟙 + t γ⁰γ¹) acting on a spinor.
SpinorFieldExpr local_spin(const GammaRep &g, const Expr &t, const Expr &N, const SpinorFieldExpr &psi) {
  const CMatrix g01 = g.gamma[0] * g.gamma[1];
  SpinorFieldExpr out{psi.chart, {}};
  for (int i = 0; i < 4; ++i) {
    CExpr s = psi.psi[i];
    for (int j = 0; j < 4; ++j)
      if (!g01[i][j].is_zero())
        s = s + CExpr{t, Expr(0)} * (g01[i][j] * psi.psi[j]);
    out.psi[i] = CExpr{N, Expr(0)} * s;
  }
  return out;
}

} // namespace

TEST_CASE("gamma basis agrees with the Pauli construction") {
  const GammaRep g = gamma_basis();
  const auto ref = pauli_dirac();
  for (int a = 0; a < 4; ++a)
    CHECK(is_zero(g.gamma[a] - ref[a]));
  CHECK(is_zero(g.lower(0) - g.gamma[0]));
  CHECK(is_zero(g.lower(2) + g.gamma[2]));
}

TEST_CASE("Clifford relations hold exactly and detect a perturbed gamma") {
  const GammaRep g = gamma_basis();
  const IdentityReport r = clifford_check(g);
  CHECK(r.checks.size() == 16);
  for (const auto &c : r.checks)
    CHECK(c.verdict.kind == ZeroKind::ProvenZero);
  // Independent: direct products.
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CMatrix m = g.gamma[a] * g.gamma[b] + g.gamma[b] * g.gamma[a];
      const int e = a == b ? (a == 0 ? 2 : -2) : 0;
      m = m - Rational(e) * identity_matrix();
      CHECK(is_zero(m));
    }
  GammaRep bad = g;
  bad.gamma[2][0][3] = bad.gamma[2][0][3] + G(1);
  CHECK_FALSE(clifford_check(bad).passed());
}

TEST_CASE("Lorentz generators close exactly") {
  const GammaRep g = gamma_basis();
  const IdentityReport r = lorentz_algebra_check(g);
  CHECK(r.passed());
  for (const auto &c : r.checks)
    CHECK(c.verdict.kind == ZeroKind::ProvenZero);
  const LorentzGenerators L = lorentz_generators(g);
  for (int a = 0; a < 4; ++a) {
    CHECK(is_zero(L.L[a][a]));
    for (int b = 0; b < 4; ++b)
      CHECK(is_zero(L.L[a][b] + L.L[b][a]));
  }
  // L_{01} = ½γ_0γ_1 = −½γ⁰γ¹
  CHECK(is_zero(L.L[0][1] + Rational(1, 2) * (g.gamma[0] * g.gamma[1])));
}

TEST_CASE("tetrad representation of covectors squares to the metric") {
  const Chart c = chart4();
  const GammaRep g = gamma_basis();
  const TetradField h = sample_tetrad(c);
  const std::vector<Expr> t{c.parse("x1"), Expr(1), c.parse("x0 - x3"), Expr(make_rational(1, 2))};
  CHECK(rep_square_check(g, h, t).zero());
  const TetradField hp = boost_tetrad(h, boost01(Rational(5, 4), Rational(3, 4)));
  CHECK(rep_square_check(g, hp, t).zero());
  const TetradField stretched(c, {{Expr(2), Expr(0), Expr(0), Expr(0)},
                                  {Expr(0), Expr(1), Expr(0), Expr(0)},
                                  {Expr(0), Expr(0), Expr(1), Expr(0)},
                                  {Expr(0), Expr(0), Expr(0), Expr(1)}});
  const std::vector<Expr> dt{Expr(1), Expr(0), Expr(0), Expr(0)};
  const NonEquivalence w = nonequivalence_witness(TetradField::identity(c), stretched, dt, {});
  CHECK(w.witnessed);
  CHECK(w.square_h == 1);
  CHECK(w.square_h_prime == Rational(1, 4));
}

TEST_CASE("spin connection is half the Lorentz connection") {
  const Chart c = chart4();
  const TetradField h = sample_tetrad(c);
  const WorldConnection W = sample_connection(c);
  const TensorField B = spin_connection(W, h);
  const TensorField A = lorentz_connection(W, h).coefficients;
  CHECK(zero_test(B - scale(A, Expr(make_rational(1, 2)))).kind == ZeroKind::ProvenZero);
}

TEST_CASE("spin connection of a rotating frame in the 1-2 plane") {
  const Chart c = chart4();
  const Expr th = c.parse("x0^2/3");
  const Expr cs = cos(th), sn = sin(th);
  const TetradField h(c, {{Expr(1), Expr(0), Expr(0), Expr(0)},
                          {Expr(0), cs, sn, Expr(0)},
                          {Expr(0), -sn, cs, Expr(0)},
                          {Expr(0), Expr(0), Expr(0), Expr(1)}});
  const TensorField B = spin_connection(WorldConnection(c), h);
  // B_0^{12} = θ′/2 = x0/3.
  CHECK(is_zero(B({0, 1, 2}) - c.parse("x0/3")).zero());
  CHECK(is_zero(B({0, 2, 1}) + c.parse("x0/3")).zero());
  for (std::size_t i = 0; i < B.size(); ++i) {
    const auto idx = B.unflatten(i);
    if (idx[0] == 0 && ((idx[1] == 1 && idx[2] == 2) || (idx[1] == 2 && idx[2] == 1)))
      continue;
    CHECK(is_zero(B.flat(i)).zero());
  }
}

TEST_CASE("flat Dirac operator reduces to γ^λ∂_λ") {
  const Chart c = chart4();
  const GammaRep g = gamma_basis();
  const SpinorFieldExpr psi = sample_spinor(c);
  const SpinorFieldExpr D = dirac_operator(g, WorldConnection(c), TetradField::identity(c), psi);
  for (int i = 0; i < 4; ++i) {
    CExpr want{Expr(0), Expr(0)};
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j)
        if (!g.gamma[l][i][j].is_zero())
          want = want + g.gamma[l][i][j] * CExpr{diff(psi.psi[j].re, c.coordinate(l)),
                                                  diff(psi.psi[j].im, c.coordinate(l))};
    CHECK(is_zero(D.psi[i].re - want.re).kind == ZeroKind::ProvenZero);
    CHECK(is_zero(D.psi[i].im - want.im).kind == ZeroKind::ProvenZero);
  }
}

TEST_CASE("Dirac operator is equivariant under a rational boost") {
  const Chart c = chart4();
  const GammaRep g = gamma_basis();
  const Rational ch(5, 4), sh(3, 4);
  CHECK_THROWS_AS(boost01(Rational(1), Rational(1, 2)), DomainError);
  const CMatrix S = boost_spin_matrix(g, ch, sh);
  // S γ^c S⁻¹ = (Λ⁻¹)^c_a γ^a, checked as Sγ^c = (Λ⁻¹)^c_a γ^a S.
  const auto lam = boost01(ch, sh);
  for (int cc = 0; cc < 4; ++cc) {
    CMatrix rhs{};
    for (int a = 0; a < 4; ++a) {
      // Λ⁻¹ = ηΛᵀη for a Lorentz matrix.
      const Rational inv = Rational(eta(cc, cc) * eta(a, a)) * lam[a][cc];
      rhs = rhs + inv * (g.gamma[a] * S);
    }
    CHECK(is_zero(S * g.gamma[cc] - rhs));
  }
  const TetradField h = sample_tetrad(c);
  const WorldConnection W = sample_connection(c);
  const SpinorFieldExpr psi = sample_spinor(c);
  const SpinorFieldExpr lhs = dirac_operator(g, W, boost_tetrad(h, lam), apply_matrix(S, psi));
  const SpinorFieldExpr rhs = apply_matrix(S, dirac_operator(g, W, h, psi));
  CHECK(spinor_difference(lhs, rhs).kind == ZeroKind::ProvenZero);
  CHECK(spinor_difference(dirac_operator(g, W, boost_tetrad(h, lam), psi), rhs).kind ==
        ZeroKind::Nonzero);
}

TEST_CASE("Dirac operator is covariant under a local boost") {
  const Chart c = chart4();
  const GammaRep g = gamma_basis();
  const TetradField h = sample_tetrad(c);
  const WorldConnection W = sample_connection(c);
  const SpinorFieldExpr psi = sample_spinor(c);
  // Rapidity-like parameter t(x): ch = (1+t²)/(1−t²), sh = 2t/(1−t²), S = (1−t²)^{−1/2}(𝟙 + tγ⁰γ¹).
  const Expr t = c.parse("x2/3");
  const Expr den = Expr(1) - t * t;
  const Expr N = sqrt(Expr(1) / den);
  const Expr chx = (Expr(1) + t * t) / den, shx = Expr(2) * t / den;
  std::vector<std::vector<Expr>> co = h.coframe_matrix();
  for (int m = 0; m < 4; ++m) {
    co[0][m] = chx * h.coframe(0, m) + shx * h.coframe(1, m);
    co[1][m] = shx * h.coframe(0, m) + chx * h.coframe(1, m);
  }
  const TetradField hl(c, co);
  const SpinorFieldExpr lhs = dirac_operator(g, W, hl, local_spin(g, t, N, psi));
  const SpinorFieldExpr rhs = local_spin(g, t, N, dirac_operator(g, W, h, psi));
  CHECK(spinor_difference(lhs, rhs).zero());
  // Only the constant part of S commutes past ∂: the untransformed spinor fails.
  CHECK(spinor_difference(dirac_operator(g, W, hl, psi), rhs).kind == ZeroKind::Nonzero);
}

TEST_CASE("vertical covariant differential reproduces the spin connection") {
  const Chart c = chart4();
  const TetradField h = sample_tetrad(c);
  const WorldConnection W = sample_connection(c);
  const TensorField V = vertical_covariant_differential(W);
  const auto rep = frame_jet_substitution(h);
  TensorField Vs(c, "duu");
  for (std::size_t i = 0; i < V.size(); ++i)
    Vs.set(V.unflatten(i), substitute(V.flat(i), rep));
  CHECK(zero_test(Vs - spin_connection(W, h)).zero());
  CHECK(frame_jet_name(1, 2) == "e12");
  CHECK(frame_jet_name(1, 2, 3) == "e12_d3");
}
