#include "metaffine/geometry.hpp"

#include <sstream>

namespace maf {

namespace {

const Rational kHalf(1, 2);

Expr half(const Expr &e) { return Expr(kHalf) * e; }

Expr d(const Expr &e, const Chart &c, int i) { return diff(e, c.coordinate(i)); }

void require_chart(const Chart &a, const Chart &b) {
  if (!(a == b))
    throw MismatchError("operands live on different charts");
}

} // namespace

TensorField christoffel_lowered(const MetricField &g) {
  const Chart &c = g.chart();
  const int n = c.dim();
  // dg[μ][ν][α] = ∂_μ g_{να}
  std::vector<Expr> dg(static_cast<std::size_t>(n * n * n));
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Expr v = d(g.g(a, b), c, m);
        dg[(m * n + a) * n + b] = v;
        dg[(m * n + b) * n + a] = v;
      }
  auto at = [&](int m, int a, int b) -> const Expr & { return dg[(m * n + a) * n + b]; };
  TensorField out(c, "ddd");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        out.set({m, nu, a}, Expr(-kHalf) * (at(m, nu, a) + at(a, nu, m) - at(nu, m, a)));
  return out;
}

WorldConnection raise_connection(const TensorField &lowered, const MetricField &g) {
  require_chart(lowered.chart(), g.chart());
  const int n = g.dim();
  WorldConnection out(g.chart());
  for (int m = 0; m < n; ++m)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        std::vector<Expr> t;
        for (int nu = 0; nu < n; ++nu)
          if (!g.ginv(b, nu).is_zero() && !lowered({m, nu, a}).is_zero())
            t.push_back(g.ginv(b, nu) * lowered({m, nu, a}));
        out.set(m, b, a, sum(t));
      }
  return out;
}

TensorField lower_connection(const WorldConnection &gamma, const MetricField &g) {
  require_chart(gamma.chart(), g.chart());
  const int n = g.dim();
  TensorField out(g.chart(), "ddd");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a) {
        std::vector<Expr> t;
        for (int b = 0; b < n; ++b)
          if (!g.g(nu, b).is_zero() && !gamma(m, b, a).is_zero())
            t.push_back(g.g(nu, b) * gamma(m, b, a));
        out.set({m, nu, a}, sum(t));
      }
  return out;
}

WorldConnection christoffel(const MetricField &g) { return raise_connection(christoffel_lowered(g), g); }

TensorField torsion(const WorldConnection &gamma) {
  const int n = gamma.dim();
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(n * n * n));
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int l = 0; l < n; ++l)
        comps.push_back(gamma(m, nu, l) - gamma(l, nu, m));
  return TensorField(gamma.chart(), "dud", std::move(comps), {{0, 2, Symmetry::Antisymmetric}});
}

TensorField curvature(const WorldConnection &gamma) {
  const Chart &c = gamma.chart();
  const int n = c.dim();
  TensorField R(c, "ddud", {{0, 1, Symmetry::Antisymmetric}});
  for (int l = 0; l < n; ++l)
    for (int m = l + 1; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<Expr> t{d(gamma(m, a, b), c, l), -d(gamma(l, a, b), c, m)};
          for (int g = 0; g < n; ++g) {
            t.push_back(gamma(l, g, b) * gamma(m, a, g));
            t.push_back(-(gamma(m, g, b) * gamma(l, a, g)));
          }
          Expr v = sum(t);
          R.set({l, m, a, b}, v);
          R.set({m, l, a, b}, -v);
        }
  return R;
}

RicciTensor ricci(const WorldConnection &gamma) {
  const TensorField R = curvature(gamma);
  const int n = gamma.dim();
  TensorField w(gamma.chart(), "dd"), u(gamma.chart(), "dd");
  for (int m = 0; m < n; ++m)
    for (int b = 0; b < n; ++b) {
      std::vector<Expr> t;
      for (int l = 0; l < n; ++l)
        t.push_back(R({l, m, l, b}));
      Expr v = sum(t);
      u.set({m, b}, v);
      w.set({m, b}, half(v));
    }
  return {std::move(w), std::move(u)};
}

Expr scalar_curvature(const WorldConnection &gamma, const MetricField &g) {
  require_chart(gamma.chart(), g.chart());
  const TensorField ric = ricci(gamma).unweighted;
  const int n = g.dim();
  std::vector<Expr> t;
  for (int m = 0; m < n; ++m)
    for (int b = 0; b < n; ++b)
      if (!g.ginv(m, b).is_zero())
        t.push_back(g.ginv(m, b) * ric({m, b}));
  return sum(t);
}

TensorField nonmetricity(const WorldConnection &gamma, const MetricField &g) {
  const Chart &c = g.chart();
  const int n = c.dim();
  const TensorField low = lower_connection(gamma, g);
  std::vector<Expr> comps;
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        comps.push_back(d(g.g(nu, a), c, m) + low({m, nu, a}) + low({m, a, nu}));
  return TensorField(c, "ddd", std::move(comps), {{1, 2, Symmetry::Symmetric}});
}

namespace {

// T_{μνα} = g_{νβ} T_μ^β_α
TensorField lower_torsion(const TensorField &T, const MetricField &g) {
  const int n = g.dim();
  TensorField out(g.chart(), "ddd");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a) {
        std::vector<Expr> t;
        for (int b = 0; b < n; ++b)
          if (!g.g(nu, b).is_zero())
            t.push_back(g.g(nu, b) * T({m, b, a}));
        out.set({m, nu, a}, sum(t));
      }
  return out;
}

TensorField contorsion_from(const TensorField &Tl, const TensorField &C) {
  const int n = Tl.dim();
  std::vector<Expr> comps;
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        comps.push_back(half(Tl({nu, m, a}) + Tl({nu, a, m}) + Tl({m, nu, a}) + C({a, nu, m}) -
                             C({nu, a, m})));
  return TensorField(Tl.chart(), "ddd", std::move(comps), {{1, 2, Symmetry::Antisymmetric}});
}

} // namespace

TensorField contorsion(const WorldConnection &gamma, const MetricField &g) {
  require_chart(gamma.chart(), g.chart());
  return contorsion_from(lower_torsion(torsion(gamma), g), nonmetricity(gamma, g));
}

ConnectionSplitting decompose(const WorldConnection &gamma, const MetricField &g) {
  require_chart(gamma.chart(), g.chart());
  TensorField C = nonmetricity(gamma, g);
  TensorField S = contorsion_from(lower_torsion(torsion(gamma), g), C);
  return {christoffel_lowered(g), std::move(S), std::move(C)};
}

TensorField recompose_lowered(const ConnectionSplitting &p) {
  return p.christoffel + p.contorsion + scale(p.nonmetricity, Expr(kHalf));
}

WorldConnection recompose(const ConnectionSplitting &p, const MetricField &g) {
  return raise_connection(recompose_lowered(p), g);
}

WorldConnection metric_connection(const MetricField &g, const TensorField &T) {
  require_chart(T.chart(), g.chart());
  if (T.layout() != "dud")
    throw MismatchError("torsion must have layout 'dud'");
  const int n = g.dim();
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int l = m; l < n; ++l) {
        const Expr s = T({m, nu, l}) + T({l, nu, m});
        if (!s.is_zero() && !is_zero(s, with_samples({}, 8)).zero())
          throw SymmetryError("torsion is not antisymmetric in (" + std::to_string(m) + "," +
                              std::to_string(l) + ")");
      }
  const TensorField K = christoffel_lowered(g);
  const TensorField Tl = lower_torsion(T, g);
  TensorField low(g.chart(), "ddd");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a)
        low.set({m, nu, a}, K({m, nu, a}) + half(Tl({nu, m, a}) + Tl({nu, a, m}) + Tl({m, nu, a})));
  return raise_connection(low, g);
}

WorldConnection symmetric_part(const WorldConnection &gamma) {
  const int n = gamma.dim();
  WorldConnection out(gamma.chart());
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu)
        out.set(l, m, nu, half(gamma(l, m, nu) + gamma(nu, m, l)));
  return out;
}

namespace {

MetricField metric_from(const TetradField &h, bool lorentzian) {
  const int n = h.dim();
  auto e = [&](int a) { return lorentzian ? eta(a, a) : 1; };
  TensorField g(h.chart(), "dd"), gi(h.chart(), "uu");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu) {
      std::vector<Expr> t, ti;
      for (int a = 0; a < n; ++a) {
        t.push_back(Expr(e(a)) * h.coframe(a, m) * h.coframe(a, nu));
        ti.push_back(Expr(e(a)) * h.frame(m, a) * h.frame(nu, a));
      }
      g.set({m, nu}, sum(t));
      gi.set({m, nu}, sum(ti));
    }
  return MetricField(std::move(g), lorentzian ? Signature::Lorentzian : Signature::Riemannian,
                     std::move(gi));
}

} // namespace

MetricField metric_from_tetrad(const TetradField &h) { return metric_from(h, true); }
MetricField riemannian_from_tetrad(const TetradField &h) { return metric_from(h, false); }

LorentzConnection lorentz_connection(const WorldConnection &gamma, const TetradField &h) {
  require_chart(gamma.chart(), h.chart());
  const Chart &c = h.chart();
  const int n = c.dim();
  // B[λ][μ][k] = ∂_λ h^μ_k − h^ν_k Γ_λ^μ_ν
  std::vector<Expr> B(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) {
        std::vector<Expr> t{d(h.frame(m, k), c, l)};
        for (int nu = 0; nu < n; ++nu)
          if (!gamma(l, m, nu).is_zero())
            t.push_back(-(h.frame(nu, k) * gamma(l, m, nu)));
        B[(l * n + m) * n + k] = sum(t);
      }
  TensorField A(c, "duu", {{1, 2, Symmetry::Antisymmetric}});
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        std::vector<Expr> t;
        for (int m = 0; m < n; ++m) {
          // η^{kb} h^a_μ B_k − η^{ka} h^b_μ B_k with diagonal η
          t.push_back(Expr(eta(b, b)) * h.coframe(a, m) * B[(l * n + m) * n + b]);
          t.push_back(Expr(-eta(a, a)) * h.coframe(b, m) * B[(l * n + m) * n + a]);
        }
        Expr v = half(sum(t));
        A.set({l, a, b}, v);
        A.set({l, b, a}, -v);
      }
  WorldConnection gh = connection_from_lorentz(A, h);
  return {std::move(A), std::move(gh)};
}

WorldConnection connection_from_lorentz(const TensorField &A, const TetradField &h) {
  require_chart(A.chart(), h.chart());
  if (A.layout() != "duu")
    throw MismatchError("Lorentz coefficients must have layout 'duu'");
  const Chart &c = h.chart();
  const int n = c.dim();
  WorldConnection out(c);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu) {
        std::vector<Expr> t;
        for (int k = 0; k < n; ++k) {
          if (!h.coframe(k, nu).is_zero())
            t.push_back(h.coframe(k, nu) * d(h.frame(m, k), c, l));
          // η_{ka} h^μ_b h^k_ν A_λ^{ab}: a = k
          for (int b = 0; b < n; ++b)
            if (!A({l, k, b}).is_zero())
              t.push_back(Expr(eta(k, k)) * h.frame(m, b) * h.coframe(k, nu) * A({l, k, b}));
        }
        out.set(l, m, nu, sum(t));
      }
  return out;
}

SpacetimeStructure spacetime_metric(const TensorField &sigma, const MetricField &gR,
                                    const ZeroTestOptions &opts) {
  require_chart(sigma.chart(), gR.chart());
  if (sigma.layout() != "d")
    throw MismatchError("spacetime_metric expects a one-form (layout 'd')");
  if (gR.signature() != Signature::Riemannian)
    throw MismatchError("spacetime_metric expects a riemannian metric");
  const int n = gR.dim();
  std::vector<Expr> t;
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      if (!gR.ginv(m, nu).is_zero())
        t.push_back(gR.ginv(m, nu) * sigma({m}) * sigma({nu}));
  const Expr norm2 = sum(t);

  // σ must not vanish at any sample point.
  CompiledExprs tape({norm2});
  std::uint64_t state = opts.seed ^ 0x0f0eu;
  const auto &vars = tape.variables();
  std::vector<Rational> pt(vars.size());
  std::vector<double> fpt(vars.size());
  for (int s = 0; s < std::max(1, opts.samples); ++s) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      pt[i] = s == 0 ? Rational(0) : random_rational(state);
      fpt[i] = pt[i].get_d();
    }
    auto v = tape.eval_float(fpt);
    if (v && (*v)[0].value == 0.0) {
      std::ostringstream os;
      for (std::size_t i = 0; i < vars.size(); ++i)
        os << (i ? ", " : "") << vars[i] << '=' << pt[i].get_str();
      throw DomainError("one-form vanishes at (" + os.str() + ")");
    }
  }
  if (norm2.is_zero())
    throw DomainError("one-form vanishes identically");

  const Expr inv_norm = pow(sqrt(norm2), -1);
  TensorField h0(sigma.chart(), "d");
  for (int m = 0; m < n; ++m)
    h0.set({m}, sigma({m}) * inv_norm);
  TensorField g(sigma.chart(), "dd");
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      g.set({m, nu}, Expr(2) * h0({m}) * h0({nu}) - gR.g(m, nu));
  MetricField metric(std::move(g), Signature::Lorentzian, std::nullopt, opts);
  return {std::move(h0), std::move(metric)};
}

IntegrabilityReport integrability_check(const TensorField &h0, const ZeroTestOptions &opts) {
  if (h0.layout() != "d")
    throw MismatchError("integrability_check expects a one-form");
  const Chart &c = h0.chart();
  const int n = c.dim();
  if (n < 3)
    throw MismatchError("integrability_check needs dim >= 3");
  auto dh = [&](int a, int b) { return d(h0({b}), c, a) - d(h0({a}), c, b); };
  TensorField F(c, "ddd");
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu)
        F.set({l, m, nu}, dh(l, m) * h0({nu}) + dh(m, nu) * h0({l}) + dh(nu, l) * h0({m}));
  ZeroVerdict v = zero_test(F, opts);
  return {v.zero(), std::move(F), std::move(v)};
}

AffineWorldConnection cartan_connection(const WorldConnection &gamma) {
  const int n = gamma.dim();
  TensorField delta(gamma.chart(), "ud");
  for (int i = 0; i < n; ++i)
    delta.set({i, i}, Expr(1));
  return {gamma, std::move(delta)};
}

WorldConnection to_textbook(const WorldConnection &gamma) {
  std::vector<Expr> comps;
  for (const auto &e : gamma.components())
    comps.push_back(-e);
  return WorldConnection(gamma.chart(), std::move(comps));
}

TensorField curvature_to_textbook(const TensorField &R) { return scale(R, Expr(-1)); }

} // namespace maf
