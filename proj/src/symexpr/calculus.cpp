#include "node.hpp"

#include <unordered_map>
#include <unordered_set>

namespace maf {

using detail::make_product;
using detail::make_sum;
using detail::Node;
using detail::node_of;

namespace {

class Deriver {
public:
  Deriver(const DerivationRule &rule, DerivationMemo &memo) : rule_(rule), memo_(memo) {}

  Expr operator()(const Expr &e) {
    if (auto it = memo_.find(e); it != memo_.end())
      return it->second;
    Expr r = compute(e);
    memo_.emplace(e, r);
    return r;
  }

private:
  Expr compute(const Expr &e) {
    const Node &n = node_of(e);
    switch (n.kind) {
    case NodeKind::Constant:
      return Expr(0);
    case NodeKind::Symbol: {
      auto r = rule_(n.name);
      return r ? *r : Expr(0);
    }
    case NodeKind::Function: {
      const Expr &u = n.arg[0];
      Expr du = (*this)(u);
      if (du.is_zero())
        return du;
      switch (n.func) {
      case FuncKind::Sin: return cos(u) * du;
      case FuncKind::Cos: return -(sin(u) * du);
      case FuncKind::Exp: return e * du;
      case FuncKind::Ln: return du / u;
      case FuncKind::Sqrt: return make_product(Rational(1, 2), {{du, 1}, {e, -1}});
      }
      return Expr(0);
    }
    case NodeKind::Power:
    case NodeKind::Product: {
      std::vector<std::pair<Expr, Rational>> terms;
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        Expr db = (*this)(n.factors[i].first);
        if (db.is_zero())
          continue;
        std::vector<std::pair<Expr, int>> fs = n.factors;
        const int k = fs[i].second;
        fs[i].second -= 1;
        fs.emplace_back(db, 1);
        terms.emplace_back(make_product(n.number * k, std::move(fs)), Rational(1));
      }
      return make_sum(Rational(0), std::move(terms));
    }
    case NodeKind::Sum: {
      std::vector<std::pair<Expr, Rational>> terms;
      terms.reserve(n.terms.size());
      for (const auto &[t, c] : n.terms) {
        Expr dt = (*this)(t);
        if (!dt.is_zero())
          terms.emplace_back(std::move(dt), c);
      }
      return make_sum(Rational(0), std::move(terms));
    }
    }
    return Expr(0);
  }

  const DerivationRule &rule_;
  DerivationMemo &memo_;
};

class Substituter {
public:
  explicit Substituter(const std::map<std::string, Expr> &rep) : rep_(rep) {}

  Expr operator()(const Expr &e) {
    if (auto it = memo_.find(e.node()); it != memo_.end())
      return it->second;
    Expr r = compute(e);
    memo_.emplace(e.node(), r);
    keep_.push_back(e);
    return r;
  }

private:
  Expr compute(const Expr &e) {
    const Node &n = node_of(e);
    switch (n.kind) {
    case NodeKind::Constant:
      return e;
    case NodeKind::Symbol: {
      auto it = rep_.find(n.name);
      return it == rep_.end() ? e : it->second;
    }
    case NodeKind::Function:
      return apply_function(n.func, (*this)(n.arg[0]));
    case NodeKind::Power:
    case NodeKind::Product: {
      std::vector<std::pair<Expr, int>> fs;
      fs.reserve(n.factors.size());
      for (const auto &[b, k] : n.factors) {
        Expr nb = (*this)(b);
        if (nb.is_zero() && k < 0)
          throw DomainError("substitution produces division by zero");
        fs.emplace_back(std::move(nb), k);
      }
      return make_product(n.number, std::move(fs));
    }
    case NodeKind::Sum: {
      std::vector<std::pair<Expr, Rational>> ts;
      ts.reserve(n.terms.size());
      for (const auto &[t, c] : n.terms)
        ts.emplace_back((*this)(t), c);
      return make_sum(n.number, std::move(ts));
    }
    }
    return e;
  }

  const std::map<std::string, Expr> &rep_;
  std::unordered_map<const Node *, Expr> memo_;
  std::vector<Expr> keep_;
};

template <class Visit> void walk(const Expr &root, Visit &&visit) {
  std::unordered_set<const Node *> seen;
  std::vector<Expr> stack{root};
  while (!stack.empty()) {
    Expr e = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(e.node()).second)
      continue;
    const Node &n = node_of(e);
    visit(n);
    for (const auto &a : n.arg)
      stack.push_back(a);
    for (const auto &f : n.factors)
      stack.push_back(f.first);
    for (const auto &t : n.terms)
      stack.push_back(t.first);
  }
}

} // namespace

Expr derive(const Expr &e, const DerivationRule &rule) {
  DerivationMemo memo;
  return Deriver(rule, memo)(e);
}

Expr derive(const Expr &e, const DerivationRule &rule, DerivationMemo &memo) {
  return Deriver(rule, memo)(e);
}

Expr diff(const Expr &e, const std::string &var) {
  const Expr one(1);
  return derive(e, [&](const std::string &s) -> std::optional<Expr> {
    if (s == var)
      return one;
    return std::nullopt;
  });
}

Expr diff(const Expr &e, const Expr &var) {
  if (!var.is_symbol())
    throw MismatchError("diff: variable must be a symbol, got " + to_string(var));
  return diff(e, var.name());
}

Expr substitute(const Expr &e, const std::map<std::string, Expr> &replacement) {
  if (replacement.empty())
    return e;
  return Substituter(replacement)(e);
}

void collect_symbols(const Expr &e, std::set<std::string> &out) {
  walk(e, [&](const Node &n) {
    if (n.kind == NodeKind::Symbol)
      out.insert(n.name);
  });
}

std::set<std::string> free_symbols(const Expr &e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool has_functions(const Expr &e) {
  bool found = false;
  walk(e, [&](const Node &n) { found = found || n.kind == NodeKind::Function; });
  return found;
}

std::size_t dag_size(const Expr &e) {
  std::size_t count = 0;
  walk(e, [&](const Node &) { ++count; });
  return count;
}

} // namespace maf
