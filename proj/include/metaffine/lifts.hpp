#pragma once

// Lifts of base vector fields to natural bundles and their Lie brackets.

#include "metaffine/geometry.hpp"

namespace maf {

struct BaseVectorField {
  Chart chart;
  std::vector<Expr> components; // τ^λ

  BaseVectorField(Chart c, std::vector<Expr> comps);
  static BaseVectorField zero(const Chart &c);
};

BaseVectorField operator+(const BaseVectorField &a, const BaseVectorField &b);
BaseVectorField scale(const BaseVectorField &a, const Expr &factor);
/// [τ, τ′]^λ = τ^μ∂_μτ′^λ − τ′^μ∂_μτ^λ
BaseVectorField bracket(const BaseVectorField &a, const BaseVectorField &b);

enum class BundleKind : std::uint8_t { Tensor, Frame, Connection, MetricConnection, Tangent };

/// A projectable vector field on a natural bundle: base part τ^λ∂_λ plus a
/// component for each fiber coordinate.
struct LiftedVectorField {
  BundleKind bundle;
  std::string bundle_tag; // distinguishes tensor valences
  BaseVectorField base;
  std::vector<std::string> fiber;   // fiber coordinate names
  std::vector<Expr> fiber_components;

  /// Applies the field as a derivation to a function of chart and fiber
  /// coordinates.
  Expr apply(const Expr &f) const;
  VarTable vars() const;
};

/// Fiber coordinate names: ẋ^{α…}_{β…} is "y" + upper digits + "_" + lower
/// digits; H^μ_a is "H<μ>_<a>"; k_μ^α_β is "k<μ><α><β>"; σ^{αβ} (α ≤ β) is
/// "s<α><β>".
std::string tensor_coordinate(const std::vector<int> &upper, const std::vector<int> &lower);
std::string frame_coordinate(int mu, int a);
std::string connection_coordinate(int mu, int alpha, int beta);
std::string metric_coordinate(int alpha, int beta);

LiftedVectorField lift_tensor(const BaseVectorField &tau, int m, int k);
LiftedVectorField lift_frame(const BaseVectorField &tau);
LiftedVectorField lift_connection_bundle(const BaseVectorField &tau);
LiftedVectorField lift_sigma_c(const BaseVectorField &tau);
/// Γτ = τ^λ(∂_λ + Γ_λ^μ_ν ẋ^ν ∂/∂ẋ^μ) on TX.
LiftedVectorField horizontal_lift(const BaseVectorField &tau, const WorldConnection &gamma);

/// Commutator of derivations. Throws MismatchError when the operands live on
/// different bundles.
LiftedVectorField bracket(const LiftedVectorField &u, const LiftedVectorField &v);

LiftedVectorField operator-(const LiftedVectorField &u, const LiftedVectorField &v);
ZeroVerdict zero_test(const LiftedVectorField &u, const ZeroTestOptions &opts = {});

struct HorizontalDefect {
  bool found;
  BaseVectorField tau;
  BaseVectorField tau_prime;
  ZeroVerdict verdict; // on [Γτ, Γτ′] − Γ[τ, τ′]
};
/// Searches coordinate and linear vector fields for a pair whose horizontal
/// lifts fail to commute with the bracket. A witness, not a proof.
HorizontalDefect horizontal_defect(const WorldConnection &gamma, const ZeroTestOptions &opts = {});

} // namespace maf
