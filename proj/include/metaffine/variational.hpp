#pragma once

// Jet-coordinate variational calculus for metric-affine Lagrangians.
//
// Jet variables are named after their class:
//   s01        σ^{01}                   (a ≤ b)
//   s01_d2     σ^{01}_2, s01_d23 …      (derivative directions sorted)
//   k123       k_1^2_3
//   k123_d0    k_{01}^2_3 = d_0 k_1^2_3
//   t1, t1_d02 gauge parameter τ^1 and its partial derivatives
// Coordinates are x0 … x{n−1}.

#include "metaffine/geometry.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace maf {

class JetContext {
public:
  explicit JetContext(int dim = 4, int max_order = 4);

  int dim() const noexcept { return dim_; }
  int max_order() const noexcept { return max_order_; }
  const Chart &chart() const noexcept { return chart_; }

  /// σ^{ab} and its jets.
  Expr sigma(int a, int b, std::vector<int> dirs = {}) const;
  /// k_μ^α_β and its jets; k_{λμ}^α_β is k(μ, α, β, {λ}).
  Expr k(int mu, int alpha, int beta, std::vector<int> dirs = {}) const;
  /// τ^λ and its partial derivatives.
  Expr tau(int l, std::vector<int> dirs = {}) const;

  /// σ_{ab}: symbolic inverse of the σ^{ab} matrix.
  const Expr &sigma_lower(int a, int b) const;
  /// det(σ^{ab}).
  const Expr &sigma_det() const;
  /// √σ = sqrt(|det σ_{ab}|), with the sign fixed by lorentzian signature.
  const Expr &sqrt_sigma() const;

  /// 𝓡_{λμ}^α_β = k_{λμ}^α_β − k_{μλ}^α_β + k_λ^γ_β k_μ^α_γ − k_μ^γ_β k_λ^α_γ.
  Expr curvature(int l, int m, int alpha, int beta) const;
  /// t_μ^ν_λ = k_μ^ν_λ − k_λ^ν_μ.
  Expr torsion(int mu, int nu, int l) const;

  /// d_λ. Throws JetOrderError when a jet above max_order() would appear.
  Expr total_derivative(const Expr &e, int l) const;
  Expr total_derivative(const Expr &e, const std::vector<int> &dirs) const;

  /// Variables of jet order ≤ `order` (σ and k), coordinates, and the
  /// gauge parameters up to `tau_order` (negative: none).
  VarTable vars(int order = 1, int tau_order = -1) const;

  /// Zero-test options tuned to this context: σ sampled near η so that √σ
  /// is real, exact expansion only in low dimension.
  ZeroTestOptions zero_options(ZeroTestOptions base = {}) const;

  static std::optional<JetIndex> parse_name(const std::string &name);
  static std::string name(const JetIndex &j);

private:
  struct Cache;
  int dim_;
  int max_order_;
  Chart chart_;
  std::shared_ptr<Cache> cache_;
};

struct LagrangianDensity {
  std::shared_ptr<const JetContext> context;
  Expr density; // coefficient of ω
  std::string name;

  /// Throws MismatchError on variables outside the first-order jet table.
  void validate() const;
};

/// Unknown names in `text` raise UnknownIdentifierError.
LagrangianDensity parse_lagrangian(std::shared_ptr<const JetContext> ctx, std::string_view text,
                                   std::string name = "L");

/// σ^{μβ}𝓡_{λμ}^λ_β √σ.
LagrangianDensity hilbert_einstein(std::shared_ptr<const JetContext> ctx);
/// σ^{μλ}σ^{νγ}𝓡_{μν}^α_β 𝓡_{λγ}^β_α √σ.
LagrangianDensity yang_mills(std::shared_ptr<const JetContext> ctx);

struct VariationalDerivatives {
  int dim = 0;
  std::vector<Expr> sigma; // 𝓔_{αβ}, n×n, symmetric
  std::vector<Expr> k;     // 𝓔^μ_α^β, index (μ, α, β)

  const Expr &E_sigma(int a, int b) const { return sigma[a * dim + b]; }
  const Expr &E_k(int mu, int a, int b) const { return k[(mu * dim + a) * dim + b]; }
};

/// 𝓔_{αβ} = (∂/∂σ^{αβ} − d_λ∂/∂σ^{αβ}_λ)𝓛 and 𝓔^μ_α^β likewise, where
/// ∂/∂σ^{αβ} for α ≠ β is half the derivative by the stored class.
VariationalDerivatives euler_lagrange(const LagrangianDensity &L);

/// π^{λμ}_α^β = ∂𝓛/∂k_{λμ}^α_β, index (λ, μ, α, β).
std::vector<Expr> momenta(const LagrangianDensity &L);

struct IdentityCheck {
  std::string name;
  ZeroVerdict verdict;
};

struct IdentityReport {
  std::string title;
  std::vector<IdentityCheck> checks;

  bool passed() const;
};

/// K300′ antisymmetry of π and the K300 identity.
IdentityReport momentum_identities(const LagrangianDensity &L, const ZeroTestOptions &opts = {});

/// Euler–Lagrange expressions of the Hilbert–Einstein Lagrangian against
/// the closed forms, the Levi-Civita solution and the Minkowski point.
IdentityReport field_equations_HE(std::shared_ptr<const JetContext> ctx,
                                  const ZeroTestOptions &opts = {});

/// π^{(λε}_γ^{σ)} = 0, the symmetrized u-contraction identity and the
/// ∂τ-coefficient identity.
IdentityReport invariance_identities(const LagrangianDensity &L, const ZeroTestOptions &opts = {});

/// 𝓙^λ = π^λ_A(y^A_ατ^α − u^A_α^β∂_βτ^α − u^A_α^{εβ}∂_{εβ}τ^α) − τ^λ𝓛.
std::vector<Expr> energy_momentum_current(const LagrangianDensity &L);

/// Current checks: constant-τ canonical form and the first variational
/// formula (u_V·𝓔 − d_λ𝓙^λ = 0 off shell, so 𝓙 is conserved on shell).
IdentityReport current_identities(const LagrangianDensity &L, const ZeroTestOptions &opts = {});

/// U^{μλ} = π^{μλ}_α^ν(∂_ντ^α − k_σ^α_ν τ^σ), index (μ, λ).
std::vector<Expr> komar_superpotential(const LagrangianDensity &L);

/// Antisymmetry, identical conservation of d_λd_μU^{μλ}, and (for the
/// Hilbert–Einstein Lagrangian) agreement with the classical Komar
/// expression on the Levi-Civita connection.
IdentityReport komar_identities(const LagrangianDensity &L, bool compare_classical,
                                const ZeroTestOptions &opts = {});

/// k_μ^β_λ = −½σ^{βν}(d_μσ_{νλ} + d_λσ_{μν} − d_νσ_{μλ}).
std::map<std::string, Expr> levi_civita_substitution(const JetContext &ctx);

/// Noether identity residual, one expression per λ.
std::vector<Expr> noether_residuals(const LagrangianDensity &L);
IdentityReport noether_identities(const LagrangianDensity &L, const ZeroTestOptions &opts = {});

} // namespace maf
