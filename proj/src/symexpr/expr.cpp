#include "node.hpp"

#include <algorithm>
#include <cassert>

namespace maf {

using detail::Access;
using detail::Node;
using detail::node_of;

std::size_t hash_value(const Rational &r) {
  auto limb = [](const mpz_class &z) -> std::size_t {
    const auto size = mpz_size(z.get_mpz_t());
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
    for (std::size_t i = 0; i < size && i < 4; ++i)
      h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i));
    return h;
  };
  return limb(r.get_num()) * 31 + limb(r.get_den());
}

bool exact_sqrt(const Rational &r, Rational &out) {
  if (sgn(r) < 0)
    return false;
  mpz_class n = r.get_num(), d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  out = Rational(sn, sd);
  out.canonicalize();
  return true;
}

Rational rational_pow(const Rational &r, long k) {
  if (k == 0)
    return Rational(1);
  if (sgn(r) == 0) {
    if (k < 0)
      throw DomainError("division by zero");
    return Rational(0);
  }
  const unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num().get_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), r.get_den().get_mpz_t(), n);
  Rational out = k < 0 ? Rational(den, num) : Rational(num, den);
  out.canonicalize();
  return out;
}

const char *function_name(FuncKind f) noexcept {
  switch (f) {
  case FuncKind::Sin: return "sin";
  case FuncKind::Cos: return "cos";
  case FuncKind::Exp: return "exp";
  case FuncKind::Ln: return "ln";
  case FuncKind::Sqrt: return "sqrt";
  }
  return "?";
}

namespace {

constexpr std::size_t kMix = 0x9E3779B97F4A7C15ULL;

std::size_t mix(std::size_t h, std::size_t v) { return (h ^ (v + kMix + (h << 6) + (h >> 2))); }

int kind_rank(NodeKind k) {
  switch (k) {
  case NodeKind::Constant: return 0;
  case NodeKind::Symbol: return 1;
  case NodeKind::Function: return 2;
  case NodeKind::Power:
  case NodeKind::Product: return 3;
  case NodeKind::Sum: return 4;
  }
  return 5;
}

int cmp_rational(const Rational &a, const Rational &b) {
  const int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::shared_ptr<Node> new_node(NodeKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

void finish_hash(Node &n) {
  std::size_t h = static_cast<std::size_t>(n.kind) + 1;
  switch (n.kind) {
  case NodeKind::Constant:
    h = mix(h, hash_value(n.number));
    break;
  case NodeKind::Symbol:
    h = mix(h, std::hash<std::string>{}(n.name));
    break;
  case NodeKind::Function:
    h = mix(h, static_cast<std::size_t>(n.func));
    h = mix(h, n.arg[0].hash());
    break;
  case NodeKind::Power:
  case NodeKind::Product:
    h = mix(h, hash_value(n.number));
    for (const auto &[b, e] : n.factors) {
      h = mix(h, b.hash());
      h = mix(h, static_cast<std::size_t>(e));
    }
    break;
  case NodeKind::Sum:
    h = mix(h, hash_value(n.number));
    for (const auto &[t, c] : n.terms) {
      h = mix(h, t.hash());
      h = mix(h, hash_value(c));
    }
    break;
  }
  n.hash = h;
}

Expr wrap(std::shared_ptr<Node> n) {
  finish_hash(*n);
  return Access::wrap(std::move(n));
}

long floor_div2(long e) { return e >= 0 ? e / 2 : -((-e + 1) / 2); }

} // namespace

// ---------------------------------------------------------------------------
// Ordering

int compare(const Expr &a, const Expr &b) {
  if (a.node() == b.node())
    return 0;
  const Node &x = node_of(a);
  const Node &y = node_of(b);
  const int rx = kind_rank(x.kind), ry = kind_rank(y.kind);
  if (rx != ry)
    return rx < ry ? -1 : 1;
  switch (x.kind) {
  case NodeKind::Constant:
    return cmp_rational(x.number, y.number);
  case NodeKind::Symbol: {
    const int c = x.name.compare(y.name);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  case NodeKind::Function:
    if (x.func != y.func)
      return x.func < y.func ? -1 : 1;
    return compare(x.arg[0], y.arg[0]);
  case NodeKind::Power:
  case NodeKind::Product: {
    const std::size_t n = std::min(x.factors.size(), y.factors.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (const int c = compare(x.factors[i].first, y.factors[i].first))
        return c;
      if (x.factors[i].second != y.factors[i].second)
        return x.factors[i].second < y.factors[i].second ? -1 : 1;
    }
    if (x.factors.size() != y.factors.size())
      return x.factors.size() < y.factors.size() ? -1 : 1;
    return cmp_rational(x.number, y.number);
  }
  case NodeKind::Sum: {
    const std::size_t n = std::min(x.terms.size(), y.terms.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (const int c = compare(x.terms[i].first, y.terms[i].first))
        return c;
      if (const int c = cmp_rational(x.terms[i].second, y.terms[i].second))
        return c;
    }
    if (x.terms.size() != y.terms.size())
      return x.terms.size() < y.terms.size() ? -1 : 1;
    return cmp_rational(x.number, y.number);
  }
  }
  return 0;
}

bool operator==(const Expr &a, const Expr &b) {
  if (a.node() == b.node())
    return true;
  if (a.hash() != b.hash())
    return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Construction

namespace detail {

Expr make_constant(const Rational &v) {
  auto n = new_node(NodeKind::Constant);
  n->number = v;
  n->number.canonicalize();
  return wrap(std::move(n));
}

std::pair<Rational, Expr> split_coefficient(const Expr &e) {
  const Node &n = node_of(e);
  if (n.kind == NodeKind::Constant)
    return {n.number, Expr(1)};
  if (n.kind == NodeKind::Product && n.number != 1)
    return {n.number, make_product(Rational(1), n.factors)};
  return {Rational(1), e};
}

void append_factors(const Expr &e, int power, Rational &coefficient,
                    std::vector<std::pair<Expr, int>> &out) {
  const Node &n = node_of(e);
  switch (n.kind) {
  case NodeKind::Constant:
    coefficient *= rational_pow(n.number, power);
    return;
  case NodeKind::Power:
  case NodeKind::Product:
    coefficient *= rational_pow(n.number, power);
    for (const auto &[b, x] : n.factors)
      out.emplace_back(b, x * power);
    return;
  default:
    out.emplace_back(e, power);
  }
}

Expr make_sum(Rational constant, std::vector<std::pair<Expr, Rational>> terms) {
  std::vector<std::pair<Expr, Rational>> flat;
  flat.reserve(terms.size());
  for (auto &[t, c] : terms) {
    if (sgn(c) == 0)
      continue;
    const Node &n = node_of(t);
    if (n.kind == NodeKind::Constant) {
      constant += c * n.number;
    } else if (n.kind == NodeKind::Sum) {
      constant += c * n.number;
      for (const auto &[tt, cc] : n.terms)
        flat.emplace_back(tt, c * cc);
    } else if (n.kind == NodeKind::Product && n.number != 1) {
      auto [k, rest] = split_coefficient(t);
      flat.emplace_back(std::move(rest), c * k);
    } else {
      flat.emplace_back(std::move(t), std::move(c));
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const auto &a, const auto &b) { return compare(a.first, b.first) < 0; });
  std::vector<std::pair<Expr, Rational>> merged;
  merged.reserve(flat.size());
  for (auto &entry : flat) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second += entry.second;
    } else {
      if (!merged.empty() && sgn(merged.back().second) == 0)
        merged.pop_back();
      merged.push_back(std::move(entry));
    }
  }
  if (!merged.empty() && sgn(merged.back().second) == 0)
    merged.pop_back();

  if (merged.empty())
    return make_constant(constant);
  if (sgn(constant) == 0 && merged.size() == 1) {
    if (merged[0].second == 1)
      return merged[0].first;
    Rational k = merged[0].second;
    std::vector<std::pair<Expr, int>> fs;
    append_factors(merged[0].first, 1, k, fs);
    return make_product(k, std::move(fs));
  }
  auto n = new_node(NodeKind::Sum);
  n->number = std::move(constant);
  n->terms = std::move(merged);
  return wrap(std::move(n));
}

// Sum factors are stored with leading coefficient 1; the content moves to the product.
Expr monic_sum(const Node &n, int power, Rational &coefficient) {
  const Rational lead = n.terms.front().second;
  coefficient *= rational_pow(lead, power);
  auto m = new_node(NodeKind::Sum);
  m->number = n.number / lead;
  m->terms = n.terms;
  for (auto &t : m->terms)
    t.second /= lead;
  return wrap(std::move(m));
}

Expr make_product(Rational coefficient, std::vector<std::pair<Expr, int>> factors) {
  if (sgn(coefficient) == 0)
    return make_constant(Rational(0));
  std::vector<std::pair<Expr, int>> merged;
  for (int round = 0;; ++round) {
    // Flatten nested products, fold constants.
    std::vector<std::pair<Expr, int>> flat;
    flat.reserve(factors.size());
    for (auto &[b, e] : factors) {
      if (e == 0)
        continue;
      const Node &n = node_of(b);
      if (n.kind == NodeKind::Constant || n.kind == NodeKind::Product ||
          n.kind == NodeKind::Power)
        append_factors(b, e, coefficient, flat);
      else if (n.kind == NodeKind::Sum && n.terms.front().second != 1)
        flat.emplace_back(monic_sum(n, e, coefficient), e);
      else
        flat.emplace_back(std::move(b), e);
    }
    if (sgn(coefficient) == 0)
      return make_constant(Rational(0));
    std::sort(flat.begin(), flat.end(),
              [](const auto &a, const auto &b) { return compare(a.first, b.first) < 0; });
    merged.clear();
    for (auto &f : flat) {
      if (!merged.empty() && merged.back().first == f.first)
        merged.back().second += f.second;
      else
        merged.push_back(std::move(f));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto &f) { return f.second == 0; }),
                 merged.end());

    // sqrt(u)^e -> u^floor(e/2) * sqrt(u)^(e mod 2)
    std::vector<std::pair<Expr, int>> extra;
    for (auto &[b, e] : merged) {
      const Node &n = node_of(b);
      if (n.kind == NodeKind::Function && n.func == FuncKind::Sqrt && e != 1) {
        const long q = floor_div2(e);
        const int r = static_cast<int>(e - 2 * q);
        extra.emplace_back(n.arg[0], static_cast<int>(q));
        e = r;
      }
    }
    if (extra.empty())
      break;
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto &f) { return f.second == 0; }),
                 merged.end());
    factors = std::move(merged);
    for (auto &x : extra)
      factors.push_back(std::move(x));
    merged = {};
    if (round > 64)
      throw Error("product canonicalization did not converge");
  }

  if (merged.empty())
    return make_constant(coefficient);
  if (merged.size() == 1 && merged[0].second == 1) {
    if (coefficient == 1)
      return merged[0].first;
    const Node &b = node_of(merged[0].first);
    if (b.kind == NodeKind::Sum) {
      std::vector<std::pair<Expr, Rational>> ts;
      ts.reserve(b.terms.size());
      for (const auto &[t, c] : b.terms)
        ts.emplace_back(t, c * coefficient);
      return make_sum(b.number * coefficient, std::move(ts));
    }
  }
  const bool power = merged.size() == 1 && coefficient == 1;
  auto n = new_node(power ? NodeKind::Power : NodeKind::Product);
  n->number = std::move(coefficient);
  n->factors = std::move(merged);
  return wrap(std::move(n));
}

} // namespace detail

using detail::make_constant;
using detail::make_product;
using detail::make_sum;

Expr::Expr() : Expr(make_constant(Rational(0))) {}
Expr::Expr(int value) : Expr(make_constant(Rational(value))) {}
Expr::Expr(long value) : Expr(make_constant(Rational(value))) {}
Expr::Expr(const Rational &value) : Expr(make_constant(value)) {}

Expr Expr::symbol(std::string name) {
  auto n = new_node(NodeKind::Symbol);
  n->name = std::move(name);
  return wrap(std::move(n));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_zero() const noexcept {
  return node_->kind == NodeKind::Constant && sgn(node_->number) == 0;
}
bool Expr::is_one() const noexcept {
  return node_->kind == NodeKind::Constant && node_->number == 1;
}
const Rational &Expr::value() const {
  assert(is_constant());
  return node_->number;
}
const std::string &Expr::name() const {
  assert(is_symbol());
  return node_->name;
}
FuncKind Expr::function() const { return node_->func; }
Expr Expr::argument() const { return node_->arg.at(0); }
Expr Expr::base() const { return node_->factors.at(0).first; }
int Expr::exponent() const { return node_->factors.at(0).second; }
const Rational &Expr::coefficient() const { return node_->number; }
const Rational &Expr::constant_term() const { return node_->number; }
std::size_t Expr::hash() const noexcept { return node_->hash; }

std::vector<Expr> Expr::factors() const {
  std::vector<Expr> out;
  for (const auto &[b, e] : node_->factors)
    out.push_back(e == 1 ? b : make_product(Rational(1), {{b, e}}));
  return out;
}

std::vector<Expr> Expr::terms() const {
  std::vector<Expr> out;
  for (const auto &[t, c] : node_->terms)
    out.push_back(c == 1 ? t : make_sum(Rational(0), {{t, c}}));
  return out;
}

std::string Expr::str() const { return to_string(*this); }

// ---------------------------------------------------------------------------
// Arithmetic

Expr sum(const std::vector<Expr> &terms) {
  std::vector<std::pair<Expr, Rational>> ts;
  ts.reserve(terms.size());
  for (const auto &t : terms)
    ts.emplace_back(t, Rational(1));
  return make_sum(Rational(0), std::move(ts));
}

Expr product(const std::vector<Expr> &factors) {
  std::vector<std::pair<Expr, int>> fs;
  fs.reserve(factors.size());
  for (const auto &f : factors)
    fs.emplace_back(f, 1);
  return make_product(Rational(1), std::move(fs));
}

Expr operator+(const Expr &a, const Expr &b) {
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;
  return make_sum(Rational(0), {{a, Rational(1)}, {b, Rational(1)}});
}

Expr operator-(const Expr &a, const Expr &b) {
  if (b.is_zero())
    return a;
  return make_sum(Rational(0), {{a, Rational(1)}, {b, Rational(-1)}});
}

Expr operator-(const Expr &a) { return make_sum(Rational(0), {{a, Rational(-1)}}); }

Expr operator*(const Expr &a, const Expr &b) {
  if (a.is_zero() || b.is_zero())
    return Expr(0);
  if (a.is_one())
    return b;
  if (b.is_one())
    return a;
  return make_product(Rational(1), {{a, 1}, {b, 1}});
}

Expr operator/(const Expr &a, const Expr &b) {
  if (b.is_zero())
    throw DomainError("division by zero");
  return make_product(Rational(1), {{a, 1}, {b, -1}});
}

Expr &operator+=(Expr &a, const Expr &b) { return a = a + b; }
Expr &operator-=(Expr &a, const Expr &b) { return a = a - b; }
Expr &operator*=(Expr &a, const Expr &b) { return a = a * b; }

Expr pow(const Expr &base, int exponent) {
  if (exponent == 0)
    return Expr(1);
  if (exponent == 1)
    return base;
  if (base.is_constant())
    return make_constant(rational_pow(base.value(), exponent));
  return make_product(Rational(1), {{base, exponent}});
}

Expr apply_function(FuncKind f, const Expr &x) {
  if (x.is_constant()) {
    const Rational &v = x.value();
    switch (f) {
    case FuncKind::Sin:
      if (sgn(v) == 0)
        return Expr(0);
      break;
    case FuncKind::Cos:
      if (sgn(v) == 0)
        return Expr(1);
      break;
    case FuncKind::Exp:
      if (sgn(v) == 0)
        return Expr(1);
      break;
    case FuncKind::Ln:
      if (sgn(v) <= 0)
        throw DomainError("ln of non-positive constant " + v.get_str());
      if (v == 1)
        return Expr(0);
      break;
    case FuncKind::Sqrt: {
      if (sgn(v) < 0)
        throw DomainError("sqrt of negative constant " + v.get_str());
      Rational r;
      if (exact_sqrt(v, r))
        return Expr(r);
      break;
    }
    }
  }
  auto n = new_node(NodeKind::Function);
  n->func = f;
  n->arg.push_back(x);
  return wrap(std::move(n));
}

Expr sin(const Expr &x) { return apply_function(FuncKind::Sin, x); }
Expr cos(const Expr &x) { return apply_function(FuncKind::Cos, x); }
Expr exp(const Expr &x) { return apply_function(FuncKind::Exp, x); }
Expr ln(const Expr &x) { return apply_function(FuncKind::Ln, x); }
Expr sqrt(const Expr &x) { return apply_function(FuncKind::Sqrt, x); }

} // namespace maf
