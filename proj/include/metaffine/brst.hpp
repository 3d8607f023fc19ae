#pragma once

// Graded polynomial algebra over the jet variables with odd ghosts and
// antifields, and the gauge / BRST derivations acting on it.
//
// Odd generators:  c0, c0_d1, c0_d12 …   ghost c^λ and its jets (sorted)
//                  sbar01                 antifield σ̄_{αβ} (α ≤ β)
//                  kbar123                antifield k̄^μ_α^β
// Even generator:  cbar0                  antifield c̄_λ (ghost number −2)
// Even jet variables follow the naming of variational.hpp.

#include "metaffine/variational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace maf {

bool is_odd_generator(const std::string &name);
/// +1 for ghosts, −1 for σ̄ and k̄, −2 for c̄, 0 otherwise.
int ghost_number_of(const std::string &name);

std::string ghost_name(int l, std::vector<int> dirs = {});
std::string sigma_antifield_name(int a, int b);
std::string connection_antifield_name(int mu, int a, int b);
std::string ghost_antifield_name(int l);

class GradedPoly {
public:
  /// Strictly increasing list of odd generators.
  using Word = std::vector<std::string>;

  GradedPoly() = default;
  GradedPoly(const Expr &even);
  /// A single odd generator.
  static GradedPoly odd(const std::string &name);
  /// Product of odd generators in the given order (sign from sorting).
  static GradedPoly word(const std::vector<std::string> &names);

  const std::map<Word, Expr> &terms() const noexcept { return terms_; }
  void add_term(const Word &w, const Expr &coefficient);

  /// Structural emptiness (no stored monomials).
  bool empty() const noexcept { return terms_.empty(); }
  /// Coefficients expanded; monomials with zero coefficient removed.
  GradedPoly expanded(std::size_t term_budget = 200000) const;
  /// Exact zero test by expansion.
  bool is_zero() const;

  /// Parities of the monomials present (0 even, 1 odd).
  std::set<int> parities() const;
  /// Ghost numbers of the expanded monomials.
  std::set<int> ghost_numbers() const;

  /// σ̄, k̄ and c̄ set to zero.
  GradedPoly drop_antifields() const;

  std::string str() const;

  friend GradedPoly operator+(const GradedPoly &a, const GradedPoly &b);
  friend GradedPoly operator-(const GradedPoly &a, const GradedPoly &b);
  friend GradedPoly operator*(const GradedPoly &a, const GradedPoly &b);
  friend GradedPoly operator-(const GradedPoly &a);

private:
  std::map<Word, Expr> terms_;
};

/// Total derivative d_λ: even derivation acting on jets and ghost jets.
GradedPoly total_derivative(const JetContext &ctx, const GradedPoly &p, int l);

/// A derivation of the graded algebra fixed by its images of generators.
/// Odd derivations pick up (−1) per odd factor they pass.
class GradedDerivation {
public:
  /// Image of one generator; the derivation is passed so that rules can
  /// prolong through its own memoized images.
  using Rule = std::function<GradedPoly(const GradedDerivation &, const std::string &)>;

  GradedDerivation(std::string name, int parity, Rule rule);

  const std::string &name() const noexcept { return name_; }
  int parity() const noexcept { return parity_; }
  /// Memoized image of a generator (even jet variable, ghost or antifield).
  GradedPoly image(const std::string &generator) const;
  GradedPoly apply(const GradedPoly &p) const;

private:
  std::string name_;
  int parity_;
  Rule rule_;
  struct Memo;
  std::shared_ptr<Memo> memo_;
};

/// u: σ^{αβ} ↦ σ^{νβ}c^α_ν + σ^{αν}c^β_ν − c^λσ^{αβ}_λ,
/// k_μ^α_β ↦ c^α_ν k_μ^ν_β − c^ν_β k_μ^α_ν − c^ν_μ k_ν^α_β + c^α_{μβ} − c^λk_{λμ}^α_β,
/// prolonged to jets by d_λ; ghosts are annihilated.
GradedDerivation gauge_operator(std::shared_ptr<const JetContext> ctx);
/// u + c^λ_μc^μ ∂/∂c^λ, prolonged to ghost jets.
GradedDerivation brst_operator(std::shared_ptr<const JetContext> ctx);

struct NilpotencyEntry {
  std::string generator;
  bool zero;
  GradedPoly residual; // expanded, empty when zero
};

struct NilpotencyReport {
  std::string derivation;
  std::vector<NilpotencyEntry> entries;

  bool passed() const;
  std::size_t failures() const;
};

/// Generators σ^{αβ}, σ^{αβ}_λ, k_μ^α_β, k_{λμ}^α_β, c^λ, c^λ_μ.
std::vector<std::string> nilpotency_generators(const JetContext &ctx);
NilpotencyReport nilpotency_check(const GradedDerivation &d, const std::vector<std::string> &generators);

/// L + u(σ^{αβ})σ̄_{αβ} + u(k_μ^α_β)k̄^μ_α^β + c^λ_μc^μc̄_λ (sums over all
/// index values; σ̄ is symmetric).
GradedPoly extended_lagrangian(const LagrangianDensity &L);

} // namespace maf
