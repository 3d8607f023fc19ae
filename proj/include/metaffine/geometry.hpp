#pragma once

// Charts, tensor fields, metrics, tetrads and world connections.
//
// Index conventions follow the connection calculus used throughout the
// library: Γ_λ^μ_ν is stored with index order (derivative λ, upper μ,
// lower ν), the lowered form is Γ_{μνα} = g_{νβ} Γ_μ^β_α, and the
// Christoffel symbols carry a leading −1/2, so curvature signs are opposite
// to the common textbook convention (see to_textbook()).

#include "metaffine/symexpr.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace maf {

class Chart {
public:
  /// Coordinates x0..x{dim-1}.
  explicit Chart(int dim = 4, std::vector<std::string> params = {});
  Chart(std::vector<std::string> coordinates, std::vector<std::string> params);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string> &coordinates() const noexcept { return coords_; }
  const std::vector<std::string> &parameters() const noexcept { return params_; }
  const std::string &coordinate(int i) const { return coords_.at(i); }
  Expr x(int i) const { return Expr::symbol(coords_.at(i)); }
  bool oriented() const noexcept { return oriented_; }
  void set_oriented(bool o) noexcept { oriented_ = o; }

  VarTable vars() const;
  Expr parse(std::string_view text) const { return maf::parse(text, vars()); }

  friend bool operator==(const Chart &a, const Chart &b) {
    return a.coords_ == b.coords_ && a.params_ == b.params_;
  }

private:
  std::vector<std::string> coords_;
  std::vector<std::string> params_;
  bool oriented_ = true;
};

enum class Symmetry : std::uint8_t { Symmetric, Antisymmetric };

struct IndexSymmetry {
  int first;
  int second;
  Symmetry kind;
};

/// Dense component array over a chart. `layout` has one character per slot:
/// 'u' for a contravariant index, 'd' for a covariant one, in storage order.
class TensorField {
public:
  TensorField() = default;
  /// Zero field.
  TensorField(Chart chart, std::string layout, std::vector<IndexSymmetry> symmetries = {});
  /// Throws SymmetryError if a declared symmetry fails, MismatchError on a
  /// wrong component count.
  TensorField(Chart chart, std::string layout, std::vector<Expr> components,
              std::vector<IndexSymmetry> symmetries = {});

  const Chart &chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  const std::string &layout() const noexcept { return layout_; }
  int rank() const noexcept { return static_cast<int>(layout_.size()); }
  int contravariant() const;
  int covariant() const;
  const std::vector<IndexSymmetry> &symmetries() const noexcept { return symmetries_; }

  const Expr &operator()(std::initializer_list<int> idx) const { return data_[offset(idx)]; }
  const Expr &at(const std::vector<int> &idx) const { return data_[offset(idx)]; }
  const Expr &flat(std::size_t i) const { return data_.at(i); }
  /// Sets a component (no symmetry propagation).
  void set(const std::vector<int> &idx, Expr value) { data_[offset(idx)] = std::move(value); }
  const std::vector<Expr> &components() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::vector<int> unflatten(std::size_t i) const;
  std::size_t offset(const std::vector<int> &idx) const;
  std::size_t offset(std::initializer_list<int> idx) const;

  /// Verifies declared symmetries (structurally, then by zero testing).
  void check_symmetries(const ZeroTestOptions &opts = {}) const;

private:
  Chart chart_;
  std::string layout_;
  std::vector<Expr> data_;
  std::vector<IndexSymmetry> symmetries_;
};

TensorField operator+(const TensorField &a, const TensorField &b);
TensorField operator-(const TensorField &a, const TensorField &b);
TensorField scale(const TensorField &a, const Expr &factor);

/// One verdict over every component of a tensor-valued identity.
ZeroVerdict zero_test(const TensorField &t, const ZeroTestOptions &opts = {});

enum class Signature : std::uint8_t { Lorentzian, Riemannian };

const char *signature_name(Signature s) noexcept;

/// Minkowski η = diag(1, −1, …, −1).
int eta(int a, int b) noexcept;

class MetricField {
public:
  /// `g` must have layout "dd". The inverse is computed by adjugate and
  /// determinant unless supplied, in which case g·g⁻¹ = δ is verified.
  /// Throws SingularError when det g vanishes and MismatchError when the
  /// numeric signature at the sample points disagrees with `signature`.
  MetricField(TensorField g, Signature signature, std::optional<TensorField> inverse = {},
              const ZeroTestOptions &opts = {});

  static MetricField diagonal(const Chart &chart, const std::vector<Expr> &entries,
                              Signature signature);
  static MetricField minkowski(const Chart &chart);
  static MetricField euclidean(const Chart &chart);

  const Chart &chart() const noexcept { return g_.chart(); }
  int dim() const noexcept { return g_.dim(); }
  Signature signature() const noexcept { return signature_; }
  const TensorField &lower() const noexcept { return g_; }
  const TensorField &upper() const noexcept { return ginv_; }
  const Expr &g(int a, int b) const { return g_({a, b}); }
  const Expr &ginv(int a, int b) const { return ginv_({a, b}); }
  const Expr &determinant() const noexcept { return det_; }

private:
  TensorField g_;
  TensorField ginv_;
  Expr det_;
  Signature signature_;
};

/// Coframe h^a_μ (row a, column μ) with its inverse frame h^μ_a.
class TetradField {
public:
  TetradField(const Chart &chart, std::vector<std::vector<Expr>> coframe,
              const ZeroTestOptions &opts = {});
  static TetradField identity(const Chart &chart);

  const Chart &chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  /// h^a_μ
  const Expr &coframe(int a, int mu) const { return co_[a][mu]; }
  /// h^μ_a
  const Expr &frame(int mu, int a) const { return fr_[mu][a]; }
  const std::vector<std::vector<Expr>> &coframe_matrix() const noexcept { return co_; }

private:
  Chart chart_;
  std::vector<std::vector<Expr>> co_;
  std::vector<std::vector<Expr>> fr_;
};

class WorldConnection {
public:
  WorldConnection() = default;
  explicit WorldConnection(Chart chart);
  WorldConnection(Chart chart, std::vector<Expr> components);

  const Chart &chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  /// Γ_λ^μ_ν
  const Expr &operator()(int l, int m, int n) const { return data_[index(l, m, n)]; }
  void set(int l, int m, int n, Expr v) { data_[index(l, m, n)] = std::move(v); }
  const std::vector<Expr> &components() const noexcept { return data_; }
  TensorField as_array() const;

private:
  std::size_t index(int l, int m, int n) const {
    const auto d = static_cast<std::size_t>(dim());
    return (static_cast<std::size_t>(l) * d + static_cast<std::size_t>(m)) * d +
           static_cast<std::size_t>(n);
  }
  Chart chart_;
  std::vector<Expr> data_;
};

ZeroVerdict zero_test(const WorldConnection &a, const WorldConnection &b,
                      const ZeroTestOptions &opts = {});

struct AffineWorldConnection {
  WorldConnection linear;
  TensorField soldering; // layout "ud": σ^α_λ
};

// ---------------------------------------------------------------------------
// Connection calculus

/// {_{μνα}} = −½(∂_μ g_{να} + ∂_α g_{νμ} − ∂_ν g_{μα}), layout "ddd".
TensorField christoffel_lowered(const MetricField &g);
WorldConnection christoffel(const MetricField &g);

/// T_μ^ν_λ = Γ_μ^ν_λ − Γ_λ^ν_μ, layout "dud".
TensorField torsion(const WorldConnection &gamma);

/// R_{λμ}^α_β, layout "ddud".
TensorField curvature(const WorldConnection &gamma);

struct RicciTensor {
  TensorField weighted;   // ½ R_{λμ}^λ_β
  TensorField unweighted; // R_{λμ}^λ_β
};
RicciTensor ricci(const WorldConnection &gamma);
/// g^{μβ} R_{λμ}^λ_β (unweighted contraction).
Expr scalar_curvature(const WorldConnection &gamma, const MetricField &g);

/// Γ_{μνα} = g_{νβ} Γ_μ^β_α, layout "ddd".
TensorField lower_connection(const WorldConnection &gamma, const MetricField &g);
/// Inverse of lower_connection.
WorldConnection raise_connection(const TensorField &lowered, const MetricField &g);

/// C_{μνα} = ∂_μ g_{να} + Γ_{μνα} + Γ_{μαν}.
TensorField nonmetricity(const WorldConnection &gamma, const MetricField &g);

/// S_{μνα} = ½(T_{νμα} + T_{ναμ} + T_{μνα} + C_{ανμ} − C_{ναμ}).
TensorField contorsion(const WorldConnection &gamma, const MetricField &g);

struct ConnectionSplitting {
  TensorField christoffel; // {_{μνα}}
  TensorField contorsion;  // S_{μνα}
  TensorField nonmetricity; // C_{μνα}
};
ConnectionSplitting decompose(const WorldConnection &gamma, const MetricField &g);
/// Γ_{μνα} = {_{μνα}} + S_{μνα} + ½C_{μνα}, raised with g.
TensorField recompose_lowered(const ConnectionSplitting &parts);
WorldConnection recompose(const ConnectionSplitting &parts, const MetricField &g);

/// Metric connection with prescribed torsion T (layout "dud", antisymmetric
/// in its covariant pair). Throws SymmetryError otherwise.
WorldConnection metric_connection(const MetricField &g, const TensorField &torsion);

WorldConnection symmetric_part(const WorldConnection &gamma);

MetricField metric_from_tetrad(const TetradField &h);
MetricField riemannian_from_tetrad(const TetradField &h);

struct LorentzConnection {
  /// A_λ^{ab}, layout "duu".
  TensorField coefficients;
  WorldConnection connection;
};
/// A_λ^{ab} = ½(η^{kb}h^a_μ − η^{ka}h^b_μ)(∂_λ h^μ_k − h^ν_k Γ_λ^μ_ν), and
/// Γ_h rebuilt from A.
LorentzConnection lorentz_connection(const WorldConnection &gamma, const TetradField &h);
/// Γ_λ^μ_ν = h^k_ν ∂_λ h^μ_k + η_{ka} h^μ_b h^k_ν A_λ^{ab}.
WorldConnection connection_from_lorentz(const TensorField &A, const TetradField &h);

struct SpacetimeStructure {
  TensorField h0; // layout "d"
  MetricField g;
};
/// h⁰ = σ / sqrt(g^R(σ,σ)), g = 2h⁰⊗h⁰ − g^R. Throws DomainError with the
/// offending point when σ vanishes at a sample point.
SpacetimeStructure spacetime_metric(const TensorField &sigma, const MetricField &gR,
                                    const ZeroTestOptions &opts = {});

struct IntegrabilityReport {
  bool integrable;
  TensorField form; // (dh⁰∧h⁰)_{λμν}, layout "ddd"
  ZeroVerdict verdict;
};
IntegrabilityReport integrability_check(const TensorField &h0, const ZeroTestOptions &opts = {});

AffineWorldConnection cartan_connection(const WorldConnection &gamma);

/// Textbook convention: Γ ↦ −Γ, curvature ↦ −R.
WorldConnection to_textbook(const WorldConnection &gamma);
TensorField curvature_to_textbook(const TensorField &R);

/// Symbolic determinant and inverse of a square matrix.
Expr determinant(const std::vector<std::vector<Expr>> &m);
std::vector<std::vector<Expr>> inverse(const std::vector<std::vector<Expr>> &m, Expr *det = nullptr);

/// Numeric signature check: counts eigenvalue signs at sample points.
void check_signature(const TensorField &g, Signature s, const ZeroTestOptions &opts = {});

} // namespace maf
