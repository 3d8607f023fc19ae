#pragma once

// Clifford algebra of Minkowski space, Lorentz generators, tetrad-dependent
// gamma representations, spin connections and the Dirac operator (dim 4).

#include "metaffine/geometry.hpp"
#include "metaffine/variational.hpp"

#include <array>

namespace maf {

/// Gaussian rational a + b·i.
struct Gaussian {
  Rational re;
  Rational im;

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  friend Gaussian operator+(const Gaussian &a, const Gaussian &b) { return {a.re + b.re, a.im + b.im}; }
  friend Gaussian operator-(const Gaussian &a, const Gaussian &b) { return {a.re - b.re, a.im - b.im}; }
  friend Gaussian operator*(const Gaussian &a, const Gaussian &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Gaussian &a, const Gaussian &b) { return a.re == b.re && a.im == b.im; }
};

using CMatrix = std::array<std::array<Gaussian, 4>, 4>;

CMatrix identity_matrix();
CMatrix operator+(const CMatrix &a, const CMatrix &b);
CMatrix operator-(const CMatrix &a, const CMatrix &b);
CMatrix operator*(const CMatrix &a, const CMatrix &b);
CMatrix operator*(const Rational &s, const CMatrix &a);
bool is_zero(const CMatrix &m);
std::string to_string(const CMatrix &m);

struct GammaRep {
  std::array<CMatrix, 4> gamma; // γ^0 … γ^3
  /// γ_a = η_{ab}γ^b
  CMatrix lower(int a) const;
};

/// Dirac basis: γ⁰ = diag(1,1,−1,−1), γ^i = [[0, σ^i], [−σ^i, 0]].
GammaRep gamma_basis();

/// γ^aγ^b + γ^bγ^a − 2η^{ab}𝟙 for all 16 ordered pairs.
IdentityReport clifford_check(const GammaRep &g);

struct LorentzGenerators {
  std::array<std::array<CMatrix, 4>, 4> L; // L_{ab} = ¼[γ_a, γ_b]
};
LorentzGenerators lorentz_generators(const GammaRep &g);

/// [L_{ab}, γ^c] = δ^c_bγ_a − δ^c_aγ_b and
/// [L_{ab}, L_{cd}] = η_{bc}L_{ad} − η_{ac}L_{bd} − η_{bd}L_{ac} + η_{ad}L_{bc}.
IdentityReport lorentz_algebra_check(const GammaRep &g);

/// Complex scalar as a pair of real expressions.
struct CExpr {
  Expr re;
  Expr im;
};
CExpr operator+(const CExpr &a, const CExpr &b);
CExpr operator-(const CExpr &a, const CExpr &b);
CExpr operator*(const CExpr &a, const CExpr &b);
CExpr operator*(const Gaussian &a, const CExpr &b);

using SymMatrix = std::array<std::array<CExpr, 4>, 4>;
SymMatrix operator*(const SymMatrix &a, const SymMatrix &b);

struct SpinorFieldExpr {
  Chart chart;
  std::array<CExpr, 4> psi;
};

/// \widehat{t} = t_λ h^λ_a γ^a.
SymMatrix rep_covector(const GammaRep &g, const TetradField &h, const std::vector<Expr> &t);
/// rep(t)² − g^{μν}t_μt_ν·𝟙 with g induced by h, one verdict.
ZeroVerdict rep_square_check(const GammaRep &g, const TetradField &h, const std::vector<Expr> &t,
                             const ZeroTestOptions &opts = {});

/// Squares s = g_h^{μν}t_μt_ν and s′ = g_{h′}^{μν}t_μt_ν at a point. rep(t)
/// squares to s·𝟙, so its eigenvalues are ±√s; s ≠ s′ means the two
/// representations of t are not similar.
struct NonEquivalence {
  Rational square_h;
  Rational square_h_prime;
  bool witnessed;
};
NonEquivalence nonequivalence_witness(const TetradField &h, const TetradField &h_prime,
                                      const std::vector<Expr> &t, const Point &at);

/// B_λ^{ab} = ¼(η^{kb}h^a_μ − η^{ka}h^b_μ)(∂_λh^μ_k − h^ν_kΓ_λ^μ_ν), layout "duu".
TensorField spin_connection(const WorldConnection &gamma, const TetradField &h);

/// 𝒟ψ = h^λ_aγ^a(∂_λψ + B_λ^{ab}L_{ab}ψ).
SpinorFieldExpr dirac_operator(const GammaRep &g, const WorldConnection &gamma, const TetradField &h,
                               const SpinorFieldExpr &psi);

/// Formal frame jets: e<μ><k> for σ^μ_k and e<μ><k>_d<λ> for σ^μ_{λk}.
std::string frame_jet_name(int mu, int k, int l = -1);

/// Coefficients of the vertical covariant differential on formal frame
/// jets, layout "duu" over the connection's chart.
TensorField vertical_covariant_differential(const WorldConnection &gamma);

/// σ^μ_k ↦ h^μ_k, σ^μ_{λk} ↦ ∂_λh^μ_k.
std::map<std::string, Expr> frame_jet_substitution(const TetradField &h);

/// Coframe boosted by a constant Lorentz matrix: h′^a_μ = Λ^a_b h^b_μ.
TetradField boost_tetrad(const TetradField &h, const std::array<std::array<Rational, 4>, 4> &lambda);
/// Boost in the 0-1 plane with Λ^0_0 = Λ^1_1 = ch, Λ^0_1 = Λ^1_0 = sh.
std::array<std::array<Rational, 4>, 4> boost01(const Rational &ch, const Rational &sh);
/// Rational multiple of the spin matrix of boost01(ch, sh):
/// (1 + ch)𝟙 + sh·γ⁰γ¹, so that Sγ^cS⁻¹ = (Λ⁻¹)^c_aγ^a.
CMatrix boost_spin_matrix(const GammaRep &g, const Rational &ch, const Rational &sh);
SpinorFieldExpr apply_matrix(const CMatrix &m, const SpinorFieldExpr &psi);

ZeroVerdict spinor_difference(const SpinorFieldExpr &a, const SpinorFieldExpr &b,
                              const ZeroTestOptions &opts = {});

} // namespace maf
