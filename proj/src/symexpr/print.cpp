#include "node.hpp"

#include <sstream>

namespace maf {

using detail::Node;
using detail::node_of;

namespace {

// Precedence levels for parenthesization.
enum Prec { kSum = 1, kProduct = 2, kPower = 3 };

void print(std::ostream &os, const Expr &e, int context);

bool is_atomic(const Expr &e) {
  const Node &n = node_of(e);
  if (n.kind == NodeKind::Constant)
    return is_integer(n.number) && sgn(n.number) >= 0;
  return n.kind == NodeKind::Symbol || n.kind == NodeKind::Function;
}

void print_factor(std::ostream &os, const Expr &base, int exp) {
  if (exp == 1) {
    print(os, base, kProduct);
    return;
  }
  if (is_atomic(base)) {
    print(os, base, kPower);
  } else {
    os << '(';
    print(os, base, 0);
    os << ')';
  }
  os << '^' << exp;
}

// Prints coefficient * factors without a leading sign; the caller handles
// the sign of the coefficient.
void print_monomial(std::ostream &os, const Rational &abs_coeff,
                    const std::vector<std::pair<Expr, int>> &factors) {
  bool any = false;
  auto sep = [&] {
    if (any)
      os << '*';
    any = true;
  };
  if (abs_coeff.get_num() != 1 || factors.empty() ||
      std::none_of(factors.begin(), factors.end(), [](const auto &f) { return f.second > 0; })) {
    sep();
    os << abs_coeff.get_num().get_str();
  }
  for (const auto &[b, x] : factors)
    if (x > 0) {
      sep();
      print_factor(os, b, x);
    }
  std::ostringstream den;
  int parts = 0;
  if (abs_coeff.get_den() != 1) {
    den << abs_coeff.get_den().get_str();
    ++parts;
  }
  for (const auto &[b, x] : factors)
    if (x < 0) {
      if (parts++)
        den << '*';
      print_factor(den, b, -x);
    }
  if (parts == 1)
    os << '/' << den.str();
  else if (parts > 1)
    os << "/(" << den.str() << ')';
}

void print_signed_term(std::ostream &os, const Rational &coeff, const Expr &rest, bool first) {
  const bool negative = sgn(coeff) < 0;
  if (first)
    os << (negative ? "-" : "");
  else
    os << (negative ? " - " : " + ");
  const Rational a = abs(coeff);
  const Node &n = node_of(rest);
  if (n.kind == NodeKind::Power || n.kind == NodeKind::Product)
    print_monomial(os, a * n.number, n.factors);
  else
    print_monomial(os, a, {{rest, 1}});
}

void print(std::ostream &os, const Expr &e, int context) {
  const Node &n = node_of(e);
  switch (n.kind) {
  case NodeKind::Constant: {
    const bool simple = is_integer(n.number) && sgn(n.number) >= 0;
    const bool wrap = !simple && context >= kProduct;
    if (wrap)
      os << '(';
    os << n.number.get_str();
    if (wrap)
      os << ')';
    return;
  }
  case NodeKind::Symbol:
    os << n.name;
    return;
  case NodeKind::Function:
    os << function_name(n.func) << '(';
    print(os, n.arg[0], 0);
    os << ')';
    return;
  case NodeKind::Power:
  case NodeKind::Product: {
    const bool wrap = context >= kProduct || (context >= kSum && sgn(n.number) < 0);
    if (wrap)
      os << '(';
    if (sgn(n.number) < 0)
      os << '-';
    print_monomial(os, abs(n.number), n.factors);
    if (wrap)
      os << ')';
    return;
  }
  case NodeKind::Sum: {
    const bool wrap = context >= kSum;
    if (wrap)
      os << '(';
    bool first = true;
    for (const auto &[t, c] : n.terms) {
      print_signed_term(os, c, t, first);
      first = false;
    }
    if (sgn(n.number) != 0)
      os << (sgn(n.number) < 0 ? " - " : " + ") << Rational(abs(n.number)).get_str();
    if (wrap)
      os << ')';
    return;
  }
  }
}

} // namespace

std::string to_string(const Expr &e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

} // namespace maf
