#include "node.hpp"

#include <algorithm>
#include <unordered_map>

namespace maf {

using detail::make_product;
using detail::make_sum;
using detail::Node;
using detail::node_of;

namespace {

// Expanded polynomial: constant + monomial -> coefficient. Monomials carry
// coefficient 1.
struct Poly {
  Rational constant;
  std::unordered_map<Expr, Rational, ExprHash> terms;
};

class Expander {
public:
  explicit Expander(std::size_t budget) : budget_(budget) {}

  Expr operator()(const Expr &e) {
    if (auto it = memo_.find(e.node()); it != memo_.end())
      return it->second;
    Expr r = compute(e);
    memo_.emplace(e.node(), r);
    keep_.push_back(e);
    return r;
  }

private:
  static Poly to_poly(const Expr &e) {
    Poly p;
    const Node &n = node_of(e);
    if (n.kind == NodeKind::Sum) {
      p.constant = n.number;
      for (const auto &[t, c] : n.terms)
        p.terms.emplace(t, c);
    } else if (n.kind == NodeKind::Constant) {
      p.constant = n.number;
    } else {
      auto [c, rest] = detail::split_coefficient(e);
      p.terms.emplace(rest, c);
    }
    return p;
  }

  static Expr from_poly(Poly &&p) {
    std::vector<std::pair<Expr, Rational>> ts;
    ts.reserve(p.terms.size());
    for (auto &[m, c] : p.terms)
      if (sgn(c) != 0)
        ts.emplace_back(m, std::move(c));
    return make_sum(std::move(p.constant), std::move(ts));
  }

  void check(std::size_t n) const {
    if (n > budget_)
      throw ExpansionBudgetError("expansion exceeded " + std::to_string(budget_) + " terms");
  }

  static bool needs_expand(const Expr &m) {
    const Node &n = node_of(m);
    if (n.kind == NodeKind::Sum)
      return true;
    for (const auto &[b, k] : n.factors)
      if (k > 0 && node_of(b).kind == NodeKind::Sum)
        return true;
    return false;
  }

  Poly multiply(const Poly &a, const Poly &b) {
    check(a.terms.size() * b.terms.size());
    Poly out;
    out.constant = a.constant * b.constant;
    auto add = [&](const Expr &m, const Rational &c) {
      auto [it, inserted] = out.terms.try_emplace(m, c);
      if (!inserted)
        it->second += c;
    };
    if (sgn(a.constant) != 0)
      for (const auto &[m, c] : b.terms)
        add(m, a.constant * c);
    if (sgn(b.constant) != 0)
      for (const auto &[m, c] : a.terms)
        add(m, b.constant * c);
    for (const auto &[ma, ca] : a.terms)
      for (const auto &[mb, cb] : b.terms) {
        Expr m = make_product(Rational(1), {{ma, 1}, {mb, 1}});
        if (needs_expand(m)) {
          // sqrt(u)*sqrt(u) collapsed to a sum
          Poly p = to_poly((*this)(m));
          out.constant += ca * cb * p.constant;
          for (const auto &[pm, pc] : p.terms)
            add(pm, ca * cb * pc);
          continue;
        }
        auto [k, rest] = detail::split_coefficient(m);
        if (rest.is_constant()) {
          out.constant += ca * cb * k;
          continue;
        }
        add(rest, ca * cb * k);
      }
    check(out.terms.size());
    return out;
  }

  Expr compute(const Expr &e) {
    const Node &n = node_of(e);
    switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::Symbol:
      return e;
    case NodeKind::Function:
      return apply_function(n.func, (*this)(n.arg[0]));
    case NodeKind::Sum: {
      Poly acc;
      acc.constant = n.number;
      for (const auto &[t, c] : n.terms) {
        Poly p = to_poly((*this)(t));
        acc.constant += c * p.constant;
        for (auto &[m, k] : p.terms) {
          auto [it, inserted] = acc.terms.try_emplace(m, c * k);
          if (!inserted)
            it->second += c * k;
        }
        check(acc.terms.size());
      }
      return from_poly(std::move(acc));
    }
    case NodeKind::Power:
    case NodeKind::Product: {
      Poly acc;
      acc.constant = n.number;
      std::vector<std::pair<Expr, int>> atoms;
      for (const auto &[b, k] : n.factors) {
        Expr eb = (*this)(b);
        if (node_of(eb).kind != NodeKind::Sum) {
          atoms.emplace_back(eb, k);
          continue;
        }
        if (k < 0) {
          atoms.emplace_back(eb, k);
          continue;
        }
        const Poly pb = to_poly(eb);
        for (int i = 0; i < k; ++i)
          acc = multiply(acc, pb);
      }
      if (!atoms.empty()) {
        Poly mono = to_poly(make_product(Rational(1), std::move(atoms)));
        acc = multiply(acc, mono);
      }
      return from_poly(std::move(acc));
    }
    }
    return e;
  }

  std::size_t budget_;
  std::unordered_map<const Node *, Expr> memo_;
  std::vector<Expr> keep_;
};

// Largest negative power of each sum base appearing in a monomial.
void sum_denominators(const Expr &mono, std::vector<std::pair<Expr, int>> &dens) {
  const Node &n = node_of(mono);
  if (n.kind != NodeKind::Power && n.kind != NodeKind::Product)
    return;
  for (const auto &[b, k] : n.factors) {
    if (k >= 0 || node_of(b).kind != NodeKind::Sum)
      continue;
    auto it = std::find_if(dens.begin(), dens.end(), [&](const auto &d) { return d.first == b; });
    if (it == dens.end())
      dens.emplace_back(b, -k);
    else
      it->second = std::max(it->second, -k);
  }
}

} // namespace

Expr expand(const Expr &e, std::size_t term_budget) { return Expander(term_budget)(e); }

Expr numerator(const Expr &e, std::size_t term_budget) {
  Expr cur = expand(e, term_budget);
  for (int round = 0; round < 32; ++round) {
    std::vector<std::pair<Expr, int>> dens;
    const Node &n = node_of(cur);
    if (n.kind == NodeKind::Sum) {
      for (const auto &[t, c] : n.terms)
        sum_denominators(t, dens);
    } else {
      sum_denominators(cur, dens);
    }
    if (dens.empty())
      return cur;
    if (n.kind != NodeKind::Sum) {
      // A single monomial vanishes iff its coefficient does.
      std::vector<std::pair<Expr, int>> fs{{cur, 1}};
      for (const auto &d : dens)
        fs.push_back(d);
      cur = expand(make_product(Rational(1), std::move(fs)), term_budget);
      continue;
    }
    Expander ex(term_budget);
    std::vector<std::pair<Expr, Rational>> parts;
    parts.reserve(n.terms.size() + 1);
    auto scaled = [&](const Expr &mono) {
      std::vector<std::pair<Expr, int>> fs{{mono, 1}};
      for (const auto &d : dens)
        fs.push_back(d);
      return ex(make_product(Rational(1), std::move(fs)));
    };
    if (sgn(n.number) != 0)
      parts.emplace_back(scaled(Expr(n.number)), Rational(1));
    std::size_t total = 0;
    for (const auto &[t, c] : n.terms) {
      Expr s = scaled(t);
      total += node_of(s).kind == NodeKind::Sum ? node_of(s).terms.size() : 1;
      if (total > term_budget)
        throw ExpansionBudgetError("numerator exceeded " + std::to_string(term_budget) + " terms");
      parts.emplace_back(std::move(s), c);
    }
    cur = make_sum(Rational(0), std::move(parts));
  }
  return cur;
}

} // namespace maf
