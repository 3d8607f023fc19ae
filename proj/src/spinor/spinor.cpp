#include "metaffine/spinor.hpp"

#include <sstream>

namespace maf {

namespace {

Gaussian gr(long re, long im = 0) { return {Rational(re), Rational(im)}; }

CMatrix zero_matrix() {
  CMatrix m;
  for (auto &row : m)
    for (auto &e : row)
      e = gr(0);
  return m;
}

std::string idx(std::initializer_list<int> v) {
  std::string s;
  for (int i : v)
    s += std::to_string(i);
  return s;
}

ZeroVerdict matrix_verdict(const CMatrix &m, const std::string &label) {
  ZeroVerdict v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!m[i][j].is_zero()) {
        v.kind = ZeroKind::Nonzero;
        const bool real = sgn(m[i][j].im) == 0;
        v.label = label + " entry " + idx({i, j}) + (real ? "" : " imaginary part");
        v.exact_value = real ? m[i][j].re : m[i][j].im;
        v.value = v.exact_value->get_d();
        return v;
      }
  return v;
}

CMatrix commutator(const CMatrix &a, const CMatrix &b) { return a * b - b * a; }

CExpr cconst(const Gaussian &g) { return {Expr(g.re), Expr(g.im)}; }

} // namespace

CMatrix identity_matrix() {
  CMatrix m = zero_matrix();
  for (int i = 0; i < 4; ++i)
    m[i][i] = gr(1);
  return m;
}

CMatrix operator+(const CMatrix &a, const CMatrix &b) {
  CMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[i][j] = a[i][j] + b[i][j];
  return m;
}

CMatrix operator-(const CMatrix &a, const CMatrix &b) {
  CMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[i][j] = a[i][j] - b[i][j];
  return m;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
  CMatrix m = zero_matrix();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      if (!a[i][k].is_zero())
        for (int j = 0; j < 4; ++j)
          m[i][j] = m[i][j] + a[i][k] * b[k][j];
  return m;
}

CMatrix operator*(const Rational &s, const CMatrix &a) {
  CMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[i][j] = {s * a[i][j].re, s * a[i][j].im};
  return m;
}

bool is_zero(const CMatrix &m) {
  for (const auto &row : m)
    for (const auto &e : row)
      if (!e.is_zero())
        return false;
  return true;
}

std::string to_string(const CMatrix &m) {
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    os << (i ? "; " : "[");
    for (int j = 0; j < 4; ++j) {
      const auto &e = m[i][j];
      os << (j ? " " : "");
      if (sgn(e.im) == 0)
        os << e.re.get_str();
      else if (sgn(e.re) == 0)
        os << e.im.get_str() << "i";
      else
        os << e.re.get_str() << (sgn(e.im) > 0 ? "+" : "") << e.im.get_str() << "i";
    }
  }
  os << "]";
  return os.str();
}

CMatrix GammaRep::lower(int a) const { return Rational(eta(a, a)) * gamma[a]; }

GammaRep gamma_basis() {
  GammaRep g;
  for (auto &m : g.gamma)
    m = zero_matrix();
  g.gamma[0][0][0] = gr(1);
  g.gamma[0][1][1] = gr(1);
  g.gamma[0][2][2] = gr(-1);
  g.gamma[0][3][3] = gr(-1);
  // Pauli blocks: upper-right σ^i, lower-left −σ^i.
  const std::array<std::array<std::array<Gaussian, 2>, 2>, 3> pauli{{
      {{{gr(0), gr(1)}, {gr(1), gr(0)}}},
      {{{gr(0), gr(0, -1)}, {gr(0, 1), gr(0)}}},
      {{{gr(1), gr(0)}, {gr(0), gr(-1)}}},
  }};
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        g.gamma[i + 1][r][c + 2] = pauli[i][r][c];
        g.gamma[i + 1][r + 2][c] = gr(0) - pauli[i][r][c];
      }
  return g;
}

IdentityReport clifford_check(const GammaRep &g) {
  IdentityReport r{"Clifford relations", {}};
  const CMatrix one = identity_matrix();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CMatrix m = g.gamma[a] * g.gamma[b] + g.gamma[b] * g.gamma[a] - Rational(2 * eta(a, b)) * one;
      const std::string label = "{g" + std::to_string(a) + ",g" + std::to_string(b) + "}";
      r.checks.push_back({label, matrix_verdict(m, label)});
    }
  return r;
}

LorentzGenerators lorentz_generators(const GammaRep &g) {
  LorentzGenerators out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      out.L[a][b] = Rational(1, 4) * commutator(g.lower(a), g.lower(b));
  return out;
}

IdentityReport lorentz_algebra_check(const GammaRep &g) {
  const auto gen = lorentz_generators(g);
  const auto &L = gen.L;
  IdentityReport r{"Lorentz generators", {}};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        CMatrix rhs = zero_matrix();
        if (c == b)
          rhs = rhs + g.lower(a);
        if (c == a)
          rhs = rhs - g.lower(b);
        const std::string label = "[L" + idx({a, b}) + ",g" + std::to_string(c) + "]";
        r.checks.push_back({label, matrix_verdict(commutator(L[a][b], g.gamma[c]) - rhs, label)});
      }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c + 1; d < 4; ++d) {
          CMatrix rhs = Rational(eta(b, c)) * L[a][d] - Rational(eta(a, c)) * L[b][d] -
                        Rational(eta(b, d)) * L[a][c] + Rational(eta(a, d)) * L[b][c];
          const std::string label = "[L" + idx({a, b}) + ",L" + idx({c, d}) + "]";
          r.checks.push_back({label, matrix_verdict(commutator(L[a][b], L[c][d]) - rhs, label)});
        }
  return r;
}

// ---------------------------------------------------------------------------

CExpr operator+(const CExpr &a, const CExpr &b) { return {a.re + b.re, a.im + b.im}; }
CExpr operator-(const CExpr &a, const CExpr &b) { return {a.re - b.re, a.im - b.im}; }
CExpr operator*(const CExpr &a, const CExpr &b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
CExpr operator*(const Gaussian &a, const CExpr &b) { return cconst(a) * b; }

SymMatrix operator*(const SymMatrix &a, const SymMatrix &b) {
  SymMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CExpr s{Expr(0), Expr(0)};
      for (int k = 0; k < 4; ++k)
        s = s + a[i][k] * b[k][j];
      m[i][j] = s;
    }
  return m;
}

namespace {

void require_dim4(const Chart &c) {
  if (c.dim() != 4)
    throw MismatchError("spinor calculus needs a 4-dimensional chart");
}

Expr inverse_metric(const TetradField &h, int m, int n) {
  std::vector<Expr> t;
  for (int a = 0; a < 4; ++a)
    t.push_back(Expr(eta(a, a)) * h.frame(m, a) * h.frame(n, a));
  return sum(t);
}

Expr norm(const TetradField &h, const std::vector<Expr> &t) {
  std::vector<Expr> s;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      s.push_back(inverse_metric(h, m, n) * t[m] * t[n]);
  return sum(s);
}

} // namespace

SymMatrix rep_covector(const GammaRep &g, const TetradField &h, const std::vector<Expr> &t) {
  require_dim4(h.chart());
  if (t.size() != 4)
    throw MismatchError("covector needs 4 components");
  SymMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CExpr s{Expr(0), Expr(0)};
      for (int a = 0; a < 4; ++a) {
        if (g.gamma[a][i][j].is_zero())
          continue;
        std::vector<Expr> c;
        for (int l = 0; l < 4; ++l)
          c.push_back(t[l] * h.frame(l, a));
        s = s + g.gamma[a][i][j] * CExpr{sum(c), Expr(0)};
      }
      m[i][j] = s;
    }
  return m;
}

ZeroVerdict rep_square_check(const GammaRep &g, const TetradField &h, const std::vector<Expr> &t,
                             const ZeroTestOptions &opts) {
  const SymMatrix r = rep_covector(g, h, t);
  const SymMatrix sq = r * r;
  const Expr s = norm(h, t);
  std::vector<Expr> es;
  std::vector<std::string> labels;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      es.push_back(i == j ? sq[i][j].re - s : sq[i][j].re);
      es.push_back(sq[i][j].im);
      labels.push_back("re" + idx({i, j}));
      labels.push_back("im" + idx({i, j}));
    }
  return all_zero(es, labels, opts);
}

NonEquivalence nonequivalence_witness(const TetradField &h, const TetradField &h_prime,
                                      const std::vector<Expr> &t, const Point &at) {
  NonEquivalence w{evaluate(norm(h, t), at), evaluate(norm(h_prime, t), at), false};
  w.witnessed = w.square_h != w.square_h_prime;
  return w;
}

TensorField spin_connection(const WorldConnection &gamma, const TetradField &h) {
  require_dim4(h.chart());
  const Chart &c = h.chart();
  TensorField out(c, "duu");
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (a == b)
          continue;
        std::vector<Expr> t;
        for (int k = 0; k < 4; ++k) {
          std::vector<Expr> dh;
          for (int m = 0; m < 4; ++m) {
            std::vector<Expr> inner{diff(h.frame(m, k), c.coordinate(l))};
            for (int nu = 0; nu < 4; ++nu)
              if (!gamma(l, m, nu).is_zero())
                inner.push_back(-(h.frame(nu, k) * gamma(l, m, nu)));
            const Expr pre = Expr(eta(k, b)) * h.coframe(a, m) - Expr(eta(k, a)) * h.coframe(b, m);
            if (!pre.is_zero())
              dh.push_back(pre * sum(inner));
          }
          t.push_back(sum(dh));
        }
        out.set({l, a, b}, Expr(Rational(1, 4)) * sum(t));
      }
  return out;
}

SpinorFieldExpr dirac_operator(const GammaRep &g, const WorldConnection &gamma, const TetradField &h,
                               const SpinorFieldExpr &psi) {
  require_dim4(h.chart());
  const Chart &c = h.chart();
  const TensorField B = spin_connection(gamma, h);
  const auto L = lorentz_generators(g).L;
  // D_λψ = ∂_λψ + B_λ^{ab}L_{ab}ψ
  std::array<std::array<CExpr, 4>, 4> D;
  for (int l = 0; l < 4; ++l) {
    for (int i = 0; i < 4; ++i) {
      CExpr s{diff(psi.psi[i].re, c.coordinate(l)), diff(psi.psi[i].im, c.coordinate(l))};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const Expr &coef = B({l, a, b});
          if (coef.is_zero())
            continue;
          for (int j = 0; j < 4; ++j)
            if (!L[a][b][i][j].is_zero())
              s = s + CExpr{coef, Expr(0)} * (L[a][b][i][j] * psi.psi[j]);
        }
      D[l][i] = s;
    }
  }
  SpinorFieldExpr out{c, {}};
  for (int i = 0; i < 4; ++i) {
    CExpr s{Expr(0), Expr(0)};
    for (int l = 0; l < 4; ++l)
      for (int a = 0; a < 4; ++a) {
        if (h.frame(l, a).is_zero())
          continue;
        for (int j = 0; j < 4; ++j)
          if (!g.gamma[a][i][j].is_zero())
            s = s + CExpr{h.frame(l, a), Expr(0)} * (g.gamma[a][i][j] * D[l][j]);
      }
    out.psi[i] = s;
  }
  return out;
}

std::string frame_jet_name(int mu, int k, int l) {
  std::string s = "e" + std::to_string(mu) + std::to_string(k);
  if (l >= 0)
    s += "_d" + std::to_string(l);
  return s;
}

TensorField vertical_covariant_differential(const WorldConnection &gamma) {
  const Chart &c = gamma.chart();
  require_dim4(c);
  std::vector<std::vector<Expr>> frame(4, std::vector<Expr>(4));
  for (int m = 0; m < 4; ++m)
    for (int k = 0; k < 4; ++k)
      frame[m][k] = Expr::symbol(frame_jet_name(m, k));
  const auto co = inverse(frame); // σ^a_μ at (a, μ)
  TensorField out(c, "duu");
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (a == b)
          continue;
        std::vector<Expr> t;
        for (int k = 0; k < 4; ++k)
          for (int m = 0; m < 4; ++m) {
            const Expr pre = Expr(eta(k, b)) * co[a][m] - Expr(eta(k, a)) * co[b][m];
            if (pre.is_zero())
              continue;
            std::vector<Expr> inner{Expr::symbol(frame_jet_name(m, k, l))};
            for (int nu = 0; nu < 4; ++nu)
              if (!gamma(l, m, nu).is_zero())
                inner.push_back(-(frame[nu][k] * gamma(l, m, nu)));
            t.push_back(pre * sum(inner));
          }
        out.set({l, a, b}, Expr(Rational(1, 4)) * sum(t));
      }
  return out;
}

std::map<std::string, Expr> frame_jet_substitution(const TetradField &h) {
  std::map<std::string, Expr> rep;
  const Chart &c = h.chart();
  for (int m = 0; m < 4; ++m)
    for (int k = 0; k < 4; ++k) {
      rep[frame_jet_name(m, k)] = h.frame(m, k);
      for (int l = 0; l < 4; ++l)
        rep[frame_jet_name(m, k, l)] = diff(h.frame(m, k), c.coordinate(l));
    }
  return rep;
}

TetradField boost_tetrad(const TetradField &h, const std::array<std::array<Rational, 4>, 4> &lambda) {
  require_dim4(h.chart());
  std::vector<std::vector<Expr>> co(4, std::vector<Expr>(4));
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) {
      std::vector<Expr> t;
      for (int b = 0; b < 4; ++b)
        if (sgn(lambda[a][b]) != 0)
          t.push_back(Expr(lambda[a][b]) * h.coframe(b, m));
      co[a][m] = sum(t);
    }
  return TetradField(h.chart(), co);
}

std::array<std::array<Rational, 4>, 4> boost01(const Rational &ch, const Rational &sh) {
  if (ch * ch - sh * sh != 1)
    throw DomainError("boost parameters must satisfy ch^2 - sh^2 = 1");
  std::array<std::array<Rational, 4>, 4> m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      m[a][b] = a == b ? 1 : 0;
  m[0][0] = m[1][1] = ch;
  m[0][1] = m[1][0] = sh;
  return m;
}

CMatrix boost_spin_matrix(const GammaRep &g, const Rational &ch, const Rational &sh) {
  return Rational(1 + ch) * identity_matrix() + sh * (g.gamma[0] * g.gamma[1]);
}

SpinorFieldExpr apply_matrix(const CMatrix &m, const SpinorFieldExpr &psi) {
  SpinorFieldExpr out{psi.chart, {}};
  for (int i = 0; i < 4; ++i) {
    CExpr s{Expr(0), Expr(0)};
    for (int j = 0; j < 4; ++j)
      if (!m[i][j].is_zero())
        s = s + m[i][j] * psi.psi[j];
    out.psi[i] = s;
  }
  return out;
}

ZeroVerdict spinor_difference(const SpinorFieldExpr &a, const SpinorFieldExpr &b,
                              const ZeroTestOptions &opts) {
  std::vector<Expr> es;
  std::vector<std::string> labels;
  for (int i = 0; i < 4; ++i) {
    es.push_back(a.psi[i].re - b.psi[i].re);
    es.push_back(a.psi[i].im - b.psi[i].im);
    labels.push_back("re" + std::to_string(i));
    labels.push_back("im" + std::to_string(i));
  }
  return all_zero(es, labels, opts);
}

} // namespace maf
