#pragma once

// Exact symbolic scalar expressions.
//
// An Expr is an immutable, reference-counted tree kept in canonical form:
// sums and products are flattened, rational constants folded, like terms and
// like factors collected, and operands ordered by a total order on node
// structure. There is no division node; a quotient is a product carrying a
// negative integer power. Transcendental functions stay symbolic.

#include "metaffine/error.hpp"
#include "metaffine/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace maf {

enum class NodeKind : std::uint8_t { Constant, Symbol, Function, Power, Product, Sum };
enum class FuncKind : std::uint8_t { Sin, Cos, Exp, Ln, Sqrt };

const char *function_name(FuncKind f) noexcept;

namespace detail {
struct Node;
struct Access;
} // namespace detail

class Expr {
public:
  Expr();
  Expr(int value);
  Expr(long value);
  Expr(const Rational &value);

  static Expr symbol(std::string name);

  NodeKind kind() const noexcept;
  bool is_constant() const noexcept { return kind() == NodeKind::Constant; }
  bool is_symbol() const noexcept { return kind() == NodeKind::Symbol; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Constant value. Precondition: is_constant().
  const Rational &value() const;
  /// Symbol name. Precondition: is_symbol().
  const std::string &name() const;
  /// Function kind and argument. Precondition: kind() == Function.
  FuncKind function() const;
  Expr argument() const;
  /// Power base and exponent. Precondition: kind() == Power.
  Expr base() const;
  int exponent() const;
  /// Product: rational coefficient and non-constant factors (each base^exp).
  const Rational &coefficient() const;
  std::vector<Expr> factors() const;
  /// Sum: rational constant term and non-constant terms.
  const Rational &constant_term() const;
  std::vector<Expr> terms() const;

  std::size_t hash() const noexcept;
  const detail::Node *node() const noexcept { return node_.get(); }
  std::string str() const;

private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
  friend struct detail::Access;
};

/// Total order used for canonical operand ordering: node kind, then name or
/// value, then recursive comparison of children.
int compare(const Expr &a, const Expr &b);
bool operator==(const Expr &a, const Expr &b);
inline bool operator!=(const Expr &a, const Expr &b) { return !(a == b); }
inline bool operator<(const Expr &a, const Expr &b) { return compare(a, b) < 0; }

struct ExprHash {
  std::size_t operator()(const Expr &e) const noexcept { return e.hash(); }
};

Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator*(const Expr &a, const Expr &b);
Expr operator/(const Expr &a, const Expr &b);
Expr operator-(const Expr &a);
Expr &operator+=(Expr &a, const Expr &b);
Expr &operator-=(Expr &a, const Expr &b);
Expr &operator*=(Expr &a, const Expr &b);

Expr sum(const std::vector<Expr> &terms);
Expr product(const std::vector<Expr> &factors);
Expr pow(const Expr &base, int exponent);
Expr sin(const Expr &x);
Expr cos(const Expr &x);
Expr exp(const Expr &x);
Expr ln(const Expr &x);
Expr sqrt(const Expr &x);
Expr apply_function(FuncKind f, const Expr &x);

// ---------------------------------------------------------------------------
// Variable tables

enum class VarRole : std::uint8_t {
  ChartCoordinate,
  FiberCoordinate,
  JetVariable,
  Ghost,
  Antifield,
  Parameter,
};

const char *role_name(VarRole r) noexcept;

/// Jet bookkeeping for a variable: base symbol, its own (fixed) indices and a
/// sorted multi-index of derivative directions.
struct JetIndex {
  std::string base;
  std::vector<int> fixed;
  std::vector<int> derivatives;

  int order() const noexcept { return static_cast<int>(derivatives.size()); }
  friend bool operator==(const JetIndex &, const JetIndex &) = default;
};

class VarTable {
public:
  struct Entry {
    std::string name;
    VarRole role;
    std::optional<JetIndex> jet;
  };

  VarTable() = default;
  VarTable(std::initializer_list<std::string> chart_coordinates);

  /// Adds a variable; throws MismatchError on a duplicate name with a
  /// different role. Ghost-role variables are rejected (they live only in the
  /// graded algebra).
  void add(const std::string &name, VarRole role, std::optional<JetIndex> jet = {});
  void merge(const VarTable &other);

  bool contains(std::string_view name) const;
  const Entry *find(std::string_view name) const;
  const std::vector<Entry> &entries() const noexcept { return entries_; }
  std::vector<std::string> names() const;
  std::size_t size() const noexcept { return entries_.size(); }

private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// ---------------------------------------------------------------------------
// Parsing and printing

/// Parses the expression grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' ['-'] integer)?
///   base   := integer | identifier | func '(' expr ')' | '(' expr ')'
/// Every identifier must be present in `vars`.
Expr parse(std::string_view text, const VarTable &vars);

std::string to_string(const Expr &e);

// ---------------------------------------------------------------------------
// Calculus

/// Image of each symbol under a derivation (nullopt means 0).
using DerivationRule = std::function<std::optional<Expr>(const std::string &)>;

/// Applies the derivation determined by `rule` (chain rule through every
/// node). Partial differentiation and total derivatives are special cases.
Expr derive(const Expr &e, const DerivationRule &rule);

/// Memo table that lets repeated applications of one derivation share work.
using DerivationMemo = std::unordered_map<Expr, Expr, ExprHash>;
Expr derive(const Expr &e, const DerivationRule &rule, DerivationMemo &memo);

Expr diff(const Expr &e, const std::string &var);
Expr diff(const Expr &e, const Expr &var);

Expr substitute(const Expr &e, const std::map<std::string, Expr> &replacement);

std::set<std::string> free_symbols(const Expr &e);
void collect_symbols(const Expr &e, std::set<std::string> &out);
bool has_functions(const Expr &e);
/// Number of distinct nodes in the expression DAG.
std::size_t dag_size(const Expr &e);

/// Distributes products over sums and expands positive integer powers of
/// sums. Negative powers of sums are left as opaque denominators. Throws
/// ExpansionBudgetError once an intermediate sum exceeds `term_budget` terms.
Expr expand(const Expr &e, std::size_t term_budget = 200000);

/// Multiplies out every denominator that is a power of a sum and expands the
/// result. The returned numerator vanishes iff `e` vanishes identically
/// (where defined), provided its atoms are independent.
Expr numerator(const Expr &e, std::size_t term_budget = 200000);

// ---------------------------------------------------------------------------
// Evaluation

using Point = std::map<std::string, Rational>;
using FloatPoint = std::map<std::string, double>;

/// Exact evaluation. Throws DomainError on division by zero or when a
/// transcendental function is met.
Rational evaluate(const Expr &e, const Point &at);
/// Floating-point evaluation; throws DomainError outside the domain.
double evaluate_float(const Expr &e, const FloatPoint &at);

/// A set of expressions flattened into a shared evaluation tape so that many
/// sample points can be evaluated cheaply.
class CompiledExprs {
public:
  explicit CompiledExprs(const std::vector<Expr> &roots);

  const std::vector<std::string> &variables() const noexcept { return vars_; }
  bool exact_capable() const noexcept { return exact_capable_; }
  std::size_t size() const noexcept { return ops_.size(); }

  /// nullopt when the point is singular for some root.
  std::optional<std::vector<Rational>> eval_exact(const std::vector<Rational> &values) const;

  struct FloatValue {
    double value;
    double magnitude; // scale of the summands that produced `value`
  };
  std::optional<std::vector<FloatValue>> eval_float(const std::vector<double> &values) const;

private:
  struct Op {
    NodeKind kind;
    FuncKind func{};
    Rational number;                            // constant / sum constant / coefficient
    double number_d = 0;
    int var = -1;                               // symbol slot
    std::vector<std::pair<int, Rational>> terms; // sum
    std::vector<std::pair<int, double>> terms_d;
    std::vector<std::pair<int, int>> factors;   // product / power
    int arg = -1;                               // function
  };
  std::vector<Op> ops_;
  std::vector<int> roots_;
  std::vector<std::string> vars_;
  bool exact_capable_ = true;
};

// ---------------------------------------------------------------------------
// Zero testing

enum class ZeroKind : std::uint8_t { ProvenZero, ProbablyZero, Nonzero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::ProvenZero;
  int samples = 0;                  // sample points that evaluated to zero
  Point witness;                    // for Nonzero
  std::optional<Rational> exact_value;
  double value = 0.0;
  std::string label;                // which component failed, when batched

  bool zero() const noexcept { return kind != ZeroKind::Nonzero; }
};

const char *zero_kind_name(ZeroKind k) noexcept;

enum class ExactMode : std::uint8_t { Auto, Never, Always };

struct ZeroTestOptions {
  int samples = 32;
  std::uint64_t seed = 0x5eed2024ULL;
  ExactMode exact = ExactMode::Auto;
  std::size_t term_budget = 20000;
  /// Relative tolerance used for floating-point sampling.
  double tolerance = 1e-9;
  /// Attempts per requested sample before giving up with DomainError.
  int attempts_per_sample = 40;
  /// Optional custom value generator for selected variables.
  std::function<std::optional<Rational>(const std::string &, std::uint64_t &)> sampler;
};

inline ZeroTestOptions with_samples(ZeroTestOptions o, int samples) {
  o.samples = samples;
  return o;
}

/// Decides whether `e` vanishes identically: exactly by expansion when
/// possible, otherwise by evaluation at pseudo-random rational points.
ZeroVerdict is_zero(const Expr &e, const ZeroTestOptions &opts = {});

/// Batched variant: one verdict covering all expressions (worst case wins;
/// the label of a failing component is reported).
ZeroVerdict all_zero(const std::vector<Expr> &es, const std::vector<std::string> &labels,
                     const ZeroTestOptions &opts = {});

/// Deterministic pseudo-random source used by the samplers.
std::uint64_t next_random(std::uint64_t &state) noexcept;
Rational random_rational(std::uint64_t &state, int max_numerator = 9, int max_denominator = 7);

} // namespace maf
