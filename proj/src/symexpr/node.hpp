#pragma once

#include "metaffine/symexpr.hpp"

#include <utility>
#include <vector>

namespace maf::detail {

// One node layout for every kind; unused members stay empty.
//   Constant: number
//   Symbol:   name
//   Function: func, arg
//   Power:    factors = {(base, exp)}, number == 1, exp != 0, 1
//   Product:  number = coefficient, factors = sorted (base, exp) pairs
//   Sum:      number = constant term, terms = sorted (rest, coefficient)
struct Node {
  NodeKind kind;
  std::size_t hash = 0;
  Rational number;
  std::string name;
  FuncKind func = FuncKind::Sin;
  std::vector<std::pair<Expr, Rational>> terms;
  std::vector<std::pair<Expr, int>> factors;
  std::vector<Expr> arg; // size 1 for functions
};

struct Access {
  static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
  static const Node &node(const Expr &e) { return *e.node_; }
};

inline const Node &node_of(const Expr &e) { return Access::node(e); }

Expr make_constant(const Rational &v);
/// Builds a canonical sum from a constant and (rest, coefficient) pairs that
/// may contain duplicates or zero coefficients.
Expr make_sum(Rational constant, std::vector<std::pair<Expr, Rational>> terms);
/// Builds a canonical product from a coefficient and (base, exp) pairs.
Expr make_product(Rational coefficient, std::vector<std::pair<Expr, int>> factors);

/// Splits e into (coefficient, rest) with rest carrying coefficient 1.
std::pair<Rational, Expr> split_coefficient(const Expr &e);
/// Appends the (base, exp) factors of e raised to `power`; returns the
/// numeric coefficient contribution.
void append_factors(const Expr &e, int power, Rational &coefficient,
                    std::vector<std::pair<Expr, int>> &out);

} // namespace maf::detail
