#include "node.hpp"

#include <cmath>
#include <unordered_map>

namespace maf {

using detail::Node;
using detail::node_of;

namespace {

Rational pow_exact(const Rational &b, int k) {
  if (sgn(b) == 0 && k < 0)
    throw DomainError("division by zero");
  return rational_pow(b, k);
}

} // namespace

Rational evaluate(const Expr &e, const Point &at) {
  std::unordered_map<const Node *, Rational> memo;
  std::function<Rational(const Expr &)> go = [&](const Expr &x) -> Rational {
    if (auto it = memo.find(x.node()); it != memo.end())
      return it->second;
    const Node &n = node_of(x);
    Rational r;
    switch (n.kind) {
    case NodeKind::Constant:
      r = n.number;
      break;
    case NodeKind::Symbol: {
      auto it = at.find(n.name);
      if (it == at.end())
        throw MismatchError("no value for '" + n.name + "'");
      r = it->second;
      r.canonicalize();
      break;
    }
    case NodeKind::Function: {
      const Rational a = go(n.arg[0]);
      Rational s;
      if (n.func == FuncKind::Sqrt && exact_sqrt(a, s)) {
        r = s;
        break;
      }
      if (n.func == FuncKind::Sin && sgn(a) == 0) {
        r = 0;
        break;
      }
      if ((n.func == FuncKind::Cos || n.func == FuncKind::Exp) && sgn(a) == 0) {
        r = 1;
        break;
      }
      if (n.func == FuncKind::Ln && a == 1) {
        r = 0;
        break;
      }
      throw DomainError(std::string("no exact value for ") + function_name(n.func) + "(" +
                        a.get_str() + ")");
    }
    case NodeKind::Power:
    case NodeKind::Product:
      r = n.number;
      for (const auto &[b, k] : n.factors)
        r *= pow_exact(go(b), k);
      break;
    case NodeKind::Sum:
      r = n.number;
      for (const auto &[t, c] : n.terms)
        r += c * go(t);
      break;
    }
    memo.emplace(x.node(), r);
    return r;
  };
  return go(e);
}

double evaluate_float(const Expr &e, const FloatPoint &at) {
  std::unordered_map<const Node *, double> memo;
  std::function<double(const Expr &)> go = [&](const Expr &x) -> double {
    if (auto it = memo.find(x.node()); it != memo.end())
      return it->second;
    const Node &n = node_of(x);
    double r = 0;
    switch (n.kind) {
    case NodeKind::Constant:
      r = n.number.get_d();
      break;
    case NodeKind::Symbol: {
      auto it = at.find(n.name);
      if (it == at.end())
        throw MismatchError("no value for '" + n.name + "'");
      r = it->second;
      break;
    }
    case NodeKind::Function: {
      const double a = go(n.arg[0]);
      switch (n.func) {
      case FuncKind::Sin: r = std::sin(a); break;
      case FuncKind::Cos: r = std::cos(a); break;
      case FuncKind::Exp: r = std::exp(a); break;
      case FuncKind::Ln:
        if (a <= 0)
          throw DomainError("ln of non-positive value");
        r = std::log(a);
        break;
      case FuncKind::Sqrt:
        if (a < 0)
          throw DomainError("sqrt of negative value");
        r = std::sqrt(a);
        break;
      }
      break;
    }
    case NodeKind::Power:
    case NodeKind::Product:
      r = n.number.get_d();
      for (const auto &[b, k] : n.factors) {
        const double v = go(b);
        if (v == 0 && k < 0)
          throw DomainError("division by zero");
        r *= std::pow(v, k);
      }
      break;
    case NodeKind::Sum:
      r = n.number.get_d();
      for (const auto &[t, c] : n.terms)
        r += c.get_d() * go(t);
      break;
    }
    memo.emplace(x.node(), r);
    return r;
  };
  return go(e);
}

// ---------------------------------------------------------------------------

CompiledExprs::CompiledExprs(const std::vector<Expr> &roots) {
  std::unordered_map<const Node *, int> slot;
  std::map<std::string, int> var_index;
  std::vector<Expr> keep;

  // Iterative post-order so very deep trees do not exhaust the stack.
  std::function<int(const Expr &)> emit = [&](const Expr &root) -> int {
    std::vector<std::pair<Expr, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [x, expanded] = stack.back();
      stack.pop_back();
      if (slot.count(x.node()))
        continue;
      const Node &n = node_of(x);
      if (!expanded) {
        stack.emplace_back(x, true);
        for (const auto &a : n.arg)
          if (!slot.count(a.node()))
            stack.emplace_back(a, false);
        for (const auto &f : n.factors)
          if (!slot.count(f.first.node()))
            stack.emplace_back(f.first, false);
        for (const auto &t : n.terms)
          if (!slot.count(t.first.node()))
            stack.emplace_back(t.first, false);
        continue;
      }
      Op op;
      op.kind = n.kind;
      op.number = n.number;
      op.number_d = n.number.get_d();
      switch (n.kind) {
      case NodeKind::Constant:
        break;
      case NodeKind::Symbol: {
        auto [it, inserted] = var_index.try_emplace(n.name, static_cast<int>(var_index.size()));
        op.var = it->second;
        break;
      }
      case NodeKind::Function:
        op.func = n.func;
        op.arg = slot.at(n.arg[0].node());
        exact_capable_ = false;
        break;
      case NodeKind::Power:
      case NodeKind::Product:
        for (const auto &[b, k] : n.factors)
          op.factors.emplace_back(slot.at(b.node()), k);
        break;
      case NodeKind::Sum:
        for (const auto &[t, c] : n.terms) {
          op.terms.emplace_back(slot.at(t.node()), c);
          op.terms_d.emplace_back(slot.at(t.node()), c.get_d());
        }
        break;
      }
      slot.emplace(x.node(), static_cast<int>(ops_.size()));
      ops_.push_back(std::move(op));
      keep.push_back(x);
    }
    return slot.at(root.node());
  };
  for (const auto &r : roots)
    roots_.push_back(emit(r));

  // Variables are numbered in order of first appearance; renumber them
  // alphabetically so callers see a stable order.
  vars_.reserve(var_index.size());
  std::vector<int> remap(var_index.size());
  for (const auto &[name, idx] : var_index) {
    remap[idx] = static_cast<int>(vars_.size());
    vars_.push_back(name);
  }
  for (auto &op : ops_)
    if (op.kind == NodeKind::Symbol)
      op.var = remap[op.var];
}

std::optional<std::vector<Rational>>
CompiledExprs::eval_exact(const std::vector<Rational> &values) const {
  if (!exact_capable_)
    throw DomainError("expression contains transcendental functions");
  std::vector<Rational> v(ops_.size());
  Rational tmp;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op &op = ops_[i];
    switch (op.kind) {
    case NodeKind::Constant:
      v[i] = op.number;
      break;
    case NodeKind::Symbol:
      v[i] = values.at(op.var);
      break;
    case NodeKind::Function:
      return std::nullopt;
    case NodeKind::Power:
    case NodeKind::Product:
      v[i] = op.number;
      for (const auto &[s, k] : op.factors) {
        if (sgn(v[s]) == 0 && k < 0)
          return std::nullopt;
        if (k == 1)
          v[i] *= v[s];
        else
          v[i] *= rational_pow(v[s], k);
      }
      break;
    case NodeKind::Sum:
      v[i] = op.number;
      for (const auto &[s, c] : op.terms) {
        tmp = c * v[s];
        v[i] += tmp;
      }
      break;
    }
  }
  std::vector<Rational> out;
  out.reserve(roots_.size());
  for (int r : roots_)
    out.push_back(v[r]);
  return out;
}

std::optional<std::vector<CompiledExprs::FloatValue>>
CompiledExprs::eval_float(const std::vector<double> &values) const {
  std::vector<double> v(ops_.size()), m(ops_.size());
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op &op = ops_[i];
    switch (op.kind) {
    case NodeKind::Constant:
      v[i] = op.number_d;
      m[i] = std::fabs(v[i]);
      break;
    case NodeKind::Symbol:
      v[i] = values.at(op.var);
      m[i] = std::fabs(v[i]);
      break;
    case NodeKind::Function: {
      const double a = v[op.arg], ma = m[op.arg];
      double f = 0, df = 0;
      switch (op.func) {
      case FuncKind::Sin: f = std::sin(a); df = std::cos(a); break;
      case FuncKind::Cos: f = std::cos(a); df = std::sin(a); break;
      case FuncKind::Exp: f = std::exp(a); df = f; break;
      case FuncKind::Ln:
        if (!(a > 0))
          return std::nullopt;
        f = std::log(a);
        df = 1 / a;
        break;
      case FuncKind::Sqrt:
        if (!(a > 0))
          return std::nullopt;
        f = std::sqrt(a);
        df = 0.5 / f;
        break;
      }
      v[i] = f;
      m[i] = std::fabs(f) + std::fabs(df) * ma;
      break;
    }
    case NodeKind::Power:
    case NodeKind::Product: {
      double val = op.number_d, rel = 0;
      bool zero = false;
      for (const auto &[s, k] : op.factors) {
        if (v[s] == 0) {
          if (k < 0)
            return std::nullopt;
          zero = true;
        }
        val *= k == 1 ? v[s] : std::pow(v[s], k);
        if (v[s] != 0)
          rel += std::abs(k) * m[s] / std::fabs(v[s]);
      }
      if (!std::isfinite(val))
        return std::nullopt;
      v[i] = val;
      if (!zero) {
        m[i] = std::fabs(val) * (1 + rel);
      } else {
        double mag = std::fabs(op.number_d);
        for (const auto &[s, k] : op.factors)
          mag *= k > 0 ? std::pow(std::max(m[s], std::fabs(v[s])), k) : std::pow(std::fabs(v[s]), k);
        m[i] = mag;
      }
      break;
    }
    case NodeKind::Sum: {
      double val = op.number_d, mag = std::fabs(op.number_d);
      for (const auto &[s, c] : op.terms_d) {
        val += c * v[s];
        mag += std::fabs(c) * m[s];
      }
      v[i] = val;
      m[i] = mag;
      break;
    }
    }
  }
  std::vector<FloatValue> out;
  out.reserve(roots_.size());
  for (int r : roots_)
    out.push_back({v[r], m[r]});
  return out;
}

} // namespace maf
