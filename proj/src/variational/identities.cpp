#include "metaffine/variational.hpp"

#include <algorithm>

namespace maf {

namespace {

struct Indexer {
  int n;
  int operator()(int a, int b) const { return a * n + b; }
  int operator()(int a, int b, int c) const { return (a * n + b) * n + c; }
  int operator()(int a, int b, int c, int d) const { return ((a * n + b) * n + c) * n + d; }
};

std::string idx(std::initializer_list<int> v) {
  std::string s;
  for (int i : v)
    s += std::to_string(i);
  return s;
}

/// u_μ^α_β{}^ε_γ = k_μ^ε_β δ^α_γ − k_μ^α_γ δ^ε_β − k_γ^α_β δ^ε_μ.
Expr u_first(const JetContext &c, int mu, int a, int b, int eps, int g) {
  std::vector<Expr> t;
  if (a == g)
    t.push_back(c.k(mu, eps, b));
  if (eps == b)
    t.push_back(-c.k(mu, a, g));
  if (eps == mu)
    t.push_back(-c.k(g, a, b));
  return sum(t);
}

IdentityCheck check(std::string name, const std::vector<Expr> &es,
                    const std::vector<std::string> &labels, const ZeroTestOptions &opts) {
  return {std::move(name), all_zero(es, labels, opts)};
}

ZeroTestOptions exact_first(ZeroTestOptions o) {
  o.term_budget = std::max<std::size_t>(o.term_budget, ZeroTestOptions{}.term_budget);
  return o;
}

Expr contract_upper(const JetContext &c, const std::function<Expr(int, int)> &f) {
  std::vector<Expr> t;
  for (int a = 0; a < c.dim(); ++a)
    for (int b = 0; b < c.dim(); ++b)
      t.push_back(c.sigma(a, b) * f(a, b));
  return sum(t);
}

} // namespace

IdentityReport momentum_identities(const LagrangianDensity &L, const ZeroTestOptions &opts) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto pi = momenta(L);
  IdentityReport r{"momenta of " + L.name, {}};

  std::vector<Expr> anti;
  std::vector<std::string> labels;
  for (int l = 0; l < n; ++l)
    for (int m = l; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          anti.push_back(pi[I(l, m, a, b)] + pi[I(m, l, a, b)]);
          labels.push_back("pi" + idx({l, m, a, b}));
        }
  r.checks.push_back(check("K300' pi antisymmetric", anti, labels, exact_first(opts)));

  const auto present = free_symbols(L.density);
  std::vector<Expr> k300;
  labels.clear();
  for (int nu = 0; nu < n; ++nu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Expr kv = c.k(nu, a, b);
        std::vector<Expr> t{present.count(kv.name()) ? diff(L.density, kv) : Expr(0)};
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s) {
            t.push_back(-(pi[I(l, nu, a, s)] * c.k(l, b, s)));
            t.push_back(pi[I(l, nu, s, b)] * c.k(l, s, a));
          }
        k300.push_back(sum(t));
        labels.push_back("k" + idx({nu, a, b}));
      }
  r.checks.push_back(check("K300 dL/dk = pi k - pi k", k300, labels, opts));
  return r;
}

std::map<std::string, Expr> levi_civita_substitution(const JetContext &c) {
  const int n = c.dim();
  std::vector<Expr> dl(n * n * n);
  const Indexer I{n};
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        dl[I(m, a, b)] = c.total_derivative(c.sigma_lower(a, b), m);
  std::map<std::string, Expr> rep;
  for (int m = 0; m < n; ++m)
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < n; ++l) {
        std::vector<Expr> t;
        for (int nu = 0; nu < n; ++nu)
          t.push_back(c.sigma(b, nu) * (dl[I(m, nu, l)] + dl[I(l, m, nu)] - dl[I(nu, m, l)]));
        rep[c.k(m, b, l).name()] = Expr(Rational(-1, 2)) * sum(t);
      }
  return rep;
}

IdentityReport field_equations_HE(std::shared_ptr<const JetContext> ctx,
                                  const ZeroTestOptions &opts) {
  const JetContext &c = *ctx;
  const int n = c.dim();
  const Indexer I{n};
  const LagrangianDensity L = hilbert_einstein(ctx);
  const VariationalDerivatives E = euler_lagrange(L);
  const Expr &sq = c.sqrt_sigma();
  IdentityReport r{"Hilbert-Einstein field equations", {}};

  std::vector<Expr> ric(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<Expr> t;
      for (int l = 0; l < n; ++l)
        t.push_back(c.curvature(l, a, l, b));
      ric[I(a, b)] = sum(t);
    }
  const Expr scalar = contract_upper(c, [&](int a, int b) { return ric[I(a, b)]; });

  std::vector<Expr> es;
  std::vector<std::string> labels;
  const Expr half(Rational(1, 2));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Expr rhs = sq * (half * (ric[I(a, b)] + ric[I(b, a)]) - half * c.sigma_lower(a, b) * scalar);
      es.push_back(E.E_sigma(a, b) - rhs);
      labels.push_back("E_s" + idx({a, b}));
    }
  r.checks.push_back(check("metric equation", es, labels, opts));

  std::vector<Expr> dsig(n * n); // d_λ(σ^{λβ}√σ) summed over λ
  std::vector<Expr> cols(n * n * n); // d_α(σ^{νβ}√σ)
  for (int b = 0; b < n; ++b) {
    std::vector<Expr> t;
    for (int l = 0; l < n; ++l)
      t.push_back(c.total_derivative(c.sigma(l, b) * sq, l));
    dsig[b] = sum(t);
  }
  for (int a = 0; a < n; ++a)
    for (int nu = 0; nu < n; ++nu)
      for (int b = 0; b < n; ++b)
        cols[I(a, nu, b)] = c.total_derivative(c.sigma(nu, b) * sq, a);
  es.clear();
  labels.clear();
  for (int nu = 0; nu < n; ++nu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::vector<Expr> t{-cols[I(a, nu, b)]};
        std::vector<Expr> alg;
        if (nu == a) {
          t.push_back(dsig[b]);
          for (int l = 0; l < n; ++l)
            for (int g = 0; g < n; ++g)
              alg.push_back(-(c.sigma(l, g) * c.k(l, b, g)));
        }
        for (int g = 0; g < n; ++g) {
          alg.push_back(c.sigma(nu, g) * c.k(a, b, g));
          alg.push_back(-(c.sigma(nu, b) * c.k(g, g, a)));
          alg.push_back(c.sigma(g, b) * c.k(g, nu, a));
        }
        t.push_back(sum(alg) * sq);
        es.push_back(E.E_k(nu, a, b) - sum(t));
        labels.push_back("E_k" + idx({nu, a, b}));
      }
  r.checks.push_back(check("connection equation", es, labels, opts));

  // Torsion and non-metricity form of the connection equation.
  std::vector<Expr> cc(n * n * n);
  for (int m = 0; m < n; ++m)
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < n; ++a) {
        std::vector<Expr> t{c.total_derivative(c.sigma_lower(nu, a), m)};
        for (int b = 0; b < n; ++b) {
          t.push_back(c.k(m, b, a) * c.sigma_lower(nu, b));
          t.push_back(c.k(m, b, nu) * c.sigma_lower(b, a));
        }
        cc[I(m, nu, a)] = sum(t);
      }
  auto trace_c = [&](int a) {
    return contract_upper(c, [&](int l, int g) { return cc[I(a, l, g)]; });
  };
  auto tlow = [&](int m, int e, int a) {
    std::vector<Expr> t;
    for (int nu = 0; nu < n; ++nu)
      t.push_back(c.sigma_lower(e, nu) * c.torsion(m, nu, a));
    return sum(t);
  };
  auto ttrace_last = [&](int a) {
    std::vector<Expr> t;
    for (int g = 0; g < n; ++g)
      t.push_back(c.torsion(a, g, g));
    return sum(t);
  };
  auto ttrace_first = [&](int m) {
    std::vector<Expr> t;
    for (int g = 0; g < n; ++g)
      t.push_back(c.torsion(g, g, m));
    return sum(t);
  };
  es.clear();
  labels.clear();
  const Expr inv_sq = Expr(1) / sq;
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e)
      for (int m = 0; m < n; ++m) {
        std::vector<Expr> lhs;
        for (int nu = 0; nu < n; ++nu)
          for (int b = 0; b < n; ++b)
            lhs.push_back(c.sigma_lower(nu, e) * c.sigma_lower(b, m) * E.E_k(nu, a, b));
        const Expr mixed =
            contract_upper(c, [&](int l, int b) { return cc[I(l, b, m)]; });
        std::vector<Expr> rhs{cc[I(a, e, m)],
                              -(half * c.sigma_lower(m, e) * trace_c(a)),
                              -(c.sigma_lower(a, e) * mixed),
                              half * c.sigma_lower(a, e) * trace_c(m),
                              tlow(m, e, a),
                              c.sigma_lower(m, e) * ttrace_last(a),
                              c.sigma_lower(a, e) * ttrace_first(m)};
        es.push_back(inv_sq * sum(lhs) - sum(rhs));
        labels.push_back("aem" + idx({a, e, m}));
      }
  r.checks.push_back(check("torsion/non-metricity form", es, labels, opts));

  const auto lc = levi_civita_substitution(c);
  es.clear();
  labels.clear();
  for (int nu = 0; nu < n; ++nu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        es.push_back(substitute(E.E_k(nu, a, b), lc));
        labels.push_back("E_k" + idx({nu, a, b}));
      }
  r.checks.push_back(check("Levi-Civita connection solves connection equation", es, labels, opts));

  std::set<std::string> syms;
  for (const auto &e : E.sigma)
    collect_symbols(e, syms);
  for (const auto &e : E.k)
    collect_symbols(e, syms);
  std::map<std::string, Expr> flat;
  for (const auto &s : syms) {
    auto j = JetContext::parse_name(s);
    if (j && j->base == "s" && j->order() == 0)
      flat[s] = Expr(j->fixed[0] != j->fixed[1] ? 0 : j->fixed[0] == 0 ? 1 : -1);
    else
      flat[s] = Expr(0);
  }
  es.clear();
  labels.clear();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      es.push_back(substitute(E.E_sigma(a, b), flat));
      labels.push_back("E_s" + idx({a, b}));
    }
  for (int i = 0; i < n * n * n; ++i) {
    es.push_back(substitute(E.k[i], flat));
    labels.push_back("E_k" + std::to_string(i));
  }
  r.checks.push_back(check("Minkowski point solves both equations", es, labels, opts));
  return r;
}

IdentityReport invariance_identities(const LagrangianDensity &L, const ZeroTestOptions &opts) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto pi = momenta(L);
  const auto present = free_symbols(L.density);
  IdentityReport r{"invariance identities of " + L.name, {}};

  std::vector<Expr> es;
  std::vector<std::string> labels;
  for (int l = 0; l < n; ++l)
    for (int e = l; e < n; ++e)
      for (int s = e; s < n; ++s)
        for (int g = 0; g < n; ++g) {
          es.push_back(pi[I(l, e, g, s)] + pi[I(l, s, g, e)] + pi[I(e, l, g, s)] +
                       pi[I(e, s, g, l)] + pi[I(s, l, g, e)] + pi[I(s, e, g, l)]);
          labels.push_back("les g" + idx({l, e, s, g}));
        }
  r.checks.push_back(check("symmetrized pi vanishes", es, labels, opts));

  // Coefficient of ∂_{εσ}τ^γ: ∂𝓛/∂k_ε^γ_σ + u^A_γ^ε π^σ_A, symmetrized in (ε, σ).
  auto second = [&](int e, int s, int g) {
    const Expr kv = c.k(e, g, s);
    std::vector<Expr> t{present.count(kv.name()) ? diff(L.density, kv) : Expr(0)};
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Expr &p = pi[I(s, m, a, b)];
          if (!p.is_zero())
            t.push_back(u_first(c, m, a, b, e, g) * p);
        }
    return sum(t);
  };
  es.clear();
  labels.clear();
  for (int g = 0; g < n; ++g)
    for (int e = 0; e < n; ++e)
      for (int s = e; s < n; ++s) {
        es.push_back(second(e, s, g) + second(s, e, g));
        labels.push_back("g es" + idx({g, e, s}));
      }
  r.checks.push_back(check("u-contraction identity", es, labels, opts));

  // Coefficient of ∂_βτ^α.
  const VariationalDerivatives E = euler_lagrange(L);
  es.clear();
  labels.clear();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<Expr> t;
      if (a == b)
        t.push_back(L.density);
      for (int m = 0; m < n; ++m)
        t.push_back(Expr(2) * c.sigma(b, m) * E.E_sigma(a, m));
      for (int l = 0; l < n; ++l) {
        std::vector<Expr> flux;
        for (int m = 0; m < n; ++m)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const Expr u = u_first(c, m, p, q, b, a);
              if (u.is_zero())
                continue;
              if (l == 0)
                t.push_back(u * E.E_k(m, p, q));
              const Expr &pp = pi[I(l, m, p, q)];
              if (!pp.is_zero())
                flux.push_back(pp * u);
            }
        t.push_back(c.total_derivative(sum(flux), l));
      }
      for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            const Expr &pp = pi[I(b, m, p, q)];
            if (!pp.is_zero())
              t.push_back(-(c.k(m, p, q, {a}) * pp));
          }
      es.push_back(sum(t));
      labels.push_back("a b" + idx({a, b}));
    }
  r.checks.push_back(check("first-derivative identity", es, labels, opts));
  return r;
}

std::vector<Expr> energy_momentum_current(const LagrangianDensity &L) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto pi = momenta(L);
  std::vector<Expr> J;
  for (int l = 0; l < n; ++l) {
    std::vector<Expr> t{-(c.tau(l) * L.density)};
    for (int m = 0; m < n; ++m)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const Expr &pp = pi[I(l, m, p, q)];
          if (pp.is_zero())
            continue;
          std::vector<Expr> v;
          for (int a = 0; a < n; ++a) {
            v.push_back(c.k(m, p, q, {a}) * c.tau(a));
            for (int b = 0; b < n; ++b) {
              const Expr u = u_first(c, m, p, q, b, a);
              if (!u.is_zero())
                v.push_back(-(u * c.tau(a, {b})));
            }
          }
          v.push_back(-c.tau(p, {m, q}));
          t.push_back(pp * sum(v));
        }
    J.push_back(sum(t));
  }
  return J;
}

IdentityReport current_identities(const LagrangianDensity &L, const ZeroTestOptions &opts) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto pi = momenta(L);
  const auto J = energy_momentum_current(L);
  IdentityReport r{"energy-momentum current of " + L.name, {}};

  std::map<std::string, Expr> rigid;
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a) {
      rigid[c.tau(l, {a}).name()] = Expr(0);
      for (int b = a; b < n; ++b)
        rigid[c.tau(l, {a, b}).name()] = Expr(0);
    }
  std::vector<Expr> es;
  std::vector<std::string> labels;
  for (int l = 0; l < n; ++l) {
    std::vector<Expr> t;
    for (int a = 0; a < n; ++a) {
      std::vector<Expr> T{a == l ? -L.density : Expr(0)};
      for (int m = 0; m < n; ++m)
        for (int b = 0; b < n; ++b)
          for (int nu = 0; nu < n; ++nu)
            T.push_back(pi[I(l, m, b, nu)] * c.k(m, b, nu, {a}));
      t.push_back(sum(T) * c.tau(a));
    }
    es.push_back(substitute(J[l], rigid) - sum(t));
    labels.push_back("J" + std::to_string(l));
  }
  r.checks.push_back(check("rigid translation gives canonical tensor", es, labels, opts));

  const VariationalDerivatives E = euler_lagrange(L);
  std::vector<Expr> t;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Expr &e = E.E_sigma(a, b);
      if (e.is_zero())
        continue;
      std::vector<Expr> v;
      for (int nu = 0; nu < n; ++nu) {
        v.push_back(c.sigma(nu, b) * c.tau(a, {nu}));
        v.push_back(c.sigma(a, nu) * c.tau(b, {nu}));
        v.push_back(-(c.tau(nu) * c.sigma(a, b, {nu})));
      }
      t.push_back(sum(v) * e);
    }
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const Expr &e = E.E_k(m, p, q);
        if (e.is_zero())
          continue;
        std::vector<Expr> v{c.tau(p, {m, q})};
        for (int a = 0; a < n; ++a) {
          v.push_back(-(c.tau(a) * c.k(m, p, q, {a})));
          for (int b = 0; b < n; ++b) {
            const Expr u = u_first(c, m, p, q, b, a);
            if (!u.is_zero())
              v.push_back(u * c.tau(a, {b}));
          }
        }
        t.push_back(sum(v) * e);
      }
  for (int l = 0; l < n; ++l)
    t.push_back(-c.total_derivative(J[l], l));
  r.checks.push_back(check("first variational formula", {sum(t)}, {"u.E - dJ"}, opts));
  return r;
}

std::vector<Expr> komar_superpotential(const LagrangianDensity &L) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto pi = momenta(L);
  std::vector<Expr> D(n * n); // ∂_ντ^α − k_σ^α_ν τ^σ at (α, ν)
  for (int a = 0; a < n; ++a)
    for (int nu = 0; nu < n; ++nu) {
      std::vector<Expr> t{c.tau(a, {nu})};
      for (int s = 0; s < n; ++s)
        t.push_back(-(c.k(s, a, nu) * c.tau(s)));
      D[I(a, nu)] = sum(t);
    }
  std::vector<Expr> U;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l) {
      std::vector<Expr> t;
      for (int a = 0; a < n; ++a)
        for (int nu = 0; nu < n; ++nu)
          if (!pi[I(m, l, a, nu)].is_zero())
            t.push_back(pi[I(m, l, a, nu)] * D[I(a, nu)]);
      U.push_back(sum(t));
    }
  return U;
}

IdentityReport komar_identities(const LagrangianDensity &L, bool compare_classical,
                                const ZeroTestOptions &opts) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const Indexer I{n};
  const auto U = komar_superpotential(L);
  IdentityReport r{"Komar superpotential of " + L.name, {}};

  std::vector<Expr> es;
  std::vector<std::string> labels;
  for (int m = 0; m < n; ++m)
    for (int l = m; l < n; ++l) {
      es.push_back(U[I(m, l)] + U[I(l, m)]);
      labels.push_back("U" + idx({m, l}));
    }
  r.checks.push_back(check("antisymmetry", es, labels, exact_first(opts)));

  std::vector<Expr> t;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      if (!U[I(m, l)].is_zero())
        t.push_back(c.total_derivative(U[I(m, l)], {m, l}));
  r.checks.push_back(check("divergence of divergence", {sum(t)}, {"ddU"}, opts));

  if (compare_classical) {
    const auto lc = levi_civita_substitution(c);
    std::vector<Expr> grad(n * n); // ∇_ντ^α at (α, ν)
    for (int a = 0; a < n; ++a)
      for (int nu = 0; nu < n; ++nu) {
        std::vector<Expr> g{c.tau(a, {nu})};
        for (int s = 0; s < n; ++s)
          g.push_back(-(lc.at(c.k(s, a, nu).name()) * c.tau(s)));
        grad[I(a, nu)] = sum(g);
      }
    es.clear();
    labels.clear();
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l) {
        std::vector<Expr> k;
        for (int nu = 0; nu < n; ++nu) {
          k.push_back(c.sigma(l, nu) * grad[I(m, nu)]);
          k.push_back(-(c.sigma(m, nu) * grad[I(l, nu)]));
        }
        es.push_back(substitute(U[I(m, l)], lc) - c.sqrt_sigma() * sum(k));
        labels.push_back("U" + idx({m, l}));
      }
    r.checks.push_back(check("classical Komar form on Levi-Civita connection", es, labels, opts));
  }
  return r;
}

std::vector<Expr> noether_residuals(const LagrangianDensity &L) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const VariationalDerivatives E = euler_lagrange(L);
  std::vector<Expr> out;
  for (int l = 0; l < n; ++l) {
    std::vector<Expr> t;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!E.E_sigma(a, b).is_zero())
          t.push_back(-(c.sigma(a, b, {l}) * E.E_sigma(a, b)));
    for (int m = 0; m < n; ++m) {
      std::vector<Expr> s;
      for (int b = 0; b < n; ++b)
        s.push_back(c.sigma(m, b) * E.E_sigma(l, b));
      t.push_back(Expr(-2) * c.total_derivative(sum(s), m));
    }
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (!E.E_k(m, a, b).is_zero())
            t.push_back(-(c.k(m, a, b, {l}) * E.E_k(m, a, b)));
    for (int m = 0; m < n; ++m) {
      std::vector<Expr> s;
      for (int nu = 0; nu < n; ++nu)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const Expr &e = E.E_k(nu, a, b);
            if (e.is_zero())
              continue;
            std::vector<Expr> w;
            if (a == l)
              w.push_back(c.k(nu, m, b));
            if (m == b)
              w.push_back(-c.k(nu, a, l));
            if (m == nu)
              w.push_back(-c.k(l, a, b));
            if (!w.empty())
              s.push_back(sum(w) * e);
          }
      t.push_back(-c.total_derivative(sum(s), m));
    }
    for (int m = 0; m < n; ++m)
      for (int b = 0; b < n; ++b)
        if (!E.E_k(m, l, b).is_zero())
          t.push_back(c.total_derivative(E.E_k(m, l, b), {m, b}));
    out.push_back(sum(t));
  }
  return out;
}

IdentityReport noether_identities(const LagrangianDensity &L, const ZeroTestOptions &opts) {
  const auto res = noether_residuals(L);
  IdentityReport r{"Noether identities of " + L.name, {}};
  for (std::size_t l = 0; l < res.size(); ++l)
    r.checks.push_back(check("lambda=" + std::to_string(l), {res[l]}, {"N" + std::to_string(l)}, opts));
  return r;
}

} // namespace maf
