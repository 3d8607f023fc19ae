#include "metaffine/variational.hpp"

#include <algorithm>
#include <cctype>

namespace maf {

struct JetContext::Cache {
  std::mutex mutex;
  std::vector<DerivationMemo> total; // one memo per direction
  std::vector<Expr> lower;
  Expr det;
  Expr root;
};

namespace {

std::string digits(const std::vector<int> &v) {
  std::string s;
  for (int i : v)
    s += static_cast<char>('0' + i);
  return s;
}

int fixed_count(const std::string &base) {
  if (base == "s")
    return 2;
  if (base == "k")
    return 3;
  if (base == "t")
    return 1;
  return -1;
}

// Sorted multi-indices of length r over 0..n−1.
void multisets(int n, int r, std::vector<std::vector<int>> &out) {
  std::vector<int> idx(r, 0);
  if (r == 0) {
    out.push_back({});
    return;
  }
  for (;;) {
    out.push_back(idx);
    int p = r - 1;
    while (p >= 0 && idx[p] == n - 1)
      --p;
    if (p < 0)
      return;
    ++idx[p];
    for (int q = p + 1; q < r; ++q)
      idx[q] = idx[p];
  }
}

} // namespace

std::optional<JetIndex> JetContext::parse_name(const std::string &name) {
  if (name.empty())
    return std::nullopt;
  JetIndex j;
  j.base = name.substr(0, 1);
  const int nf = fixed_count(j.base);
  if (nf < 0 || name.size() < static_cast<std::size_t>(1 + nf))
    return std::nullopt;
  std::size_t p = 1;
  for (int i = 0; i < nf; ++i, ++p) {
    if (!std::isdigit(static_cast<unsigned char>(name[p])))
      return std::nullopt;
    j.fixed.push_back(name[p] - '0');
  }
  if (p == name.size())
    return j;
  if (name.compare(p, 2, "_d") != 0 || p + 2 == name.size())
    return std::nullopt;
  for (p += 2; p < name.size(); ++p) {
    if (!std::isdigit(static_cast<unsigned char>(name[p])))
      return std::nullopt;
    j.derivatives.push_back(name[p] - '0');
  }
  if (!std::is_sorted(j.derivatives.begin(), j.derivatives.end()))
    return std::nullopt;
  if (j.base == "s" && j.fixed[0] > j.fixed[1])
    return std::nullopt;
  return j;
}

std::string JetContext::name(const JetIndex &j) {
  std::string s = j.base + digits(j.fixed);
  if (!j.derivatives.empty())
    s += "_d" + digits(j.derivatives);
  return s;
}

JetContext::JetContext(int dim, int max_order)
    : dim_(dim), max_order_(max_order), chart_(dim), cache_(std::make_shared<Cache>()) {
  if (dim < 2 || dim > 9)
    throw MismatchError("jet context dimension must be between 2 and 9");
  if (max_order < 1)
    throw JetOrderError("jet context needs max_order >= 1");
  cache_->total.resize(dim);
  std::vector<std::vector<Expr>> m(dim, std::vector<Expr>(dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      m[a][b] = sigma(a, b);
  Expr det;
  auto inv = inverse(m, &det);
  cache_->det = det;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      cache_->lower.push_back(inv[a][b]);
  const int sgn = dim % 2 == 0 ? -1 : 1;
  cache_->root = sqrt(Expr(sgn) / det);
}

Expr JetContext::sigma(int a, int b, std::vector<int> dirs) const {
  if (a > b)
    std::swap(a, b);
  std::sort(dirs.begin(), dirs.end());
  return Expr::symbol(name({"s", {a, b}, std::move(dirs)}));
}

Expr JetContext::k(int mu, int alpha, int beta, std::vector<int> dirs) const {
  std::sort(dirs.begin(), dirs.end());
  return Expr::symbol(name({"k", {mu, alpha, beta}, std::move(dirs)}));
}

Expr JetContext::tau(int l, std::vector<int> dirs) const {
  std::sort(dirs.begin(), dirs.end());
  return Expr::symbol(name({"t", {l}, std::move(dirs)}));
}

const Expr &JetContext::sigma_lower(int a, int b) const { return cache_->lower.at(a * dim_ + b); }
const Expr &JetContext::sigma_det() const { return cache_->det; }
const Expr &JetContext::sqrt_sigma() const { return cache_->root; }

Expr JetContext::curvature(int l, int m, int alpha, int beta) const {
  std::vector<Expr> t{k(m, alpha, beta, {l}), -k(l, alpha, beta, {m})};
  for (int g = 0; g < dim_; ++g) {
    t.push_back(k(l, g, beta) * k(m, alpha, g));
    t.push_back(-(k(m, g, beta) * k(l, alpha, g)));
  }
  return sum(t);
}

Expr JetContext::torsion(int mu, int nu, int l) const { return k(mu, nu, l) - k(l, nu, mu); }

Expr JetContext::total_derivative(const Expr &e, int l) const {
  if (l < 0 || l >= dim_)
    throw MismatchError("total derivative direction out of range");
  const std::string coord = chart_.coordinate(l);
  const Expr one(1);
  DerivationRule rule = [&](const std::string &s) -> std::optional<Expr> {
    if (s == coord)
      return one;
    auto j = parse_name(s);
    if (!j)
      return std::nullopt;
    if (j->order() + 1 > max_order_)
      throw JetOrderError("d_" + std::to_string(l) + " of " + s + " exceeds jet order " +
                          std::to_string(max_order_));
    j->derivatives.push_back(l);
    std::sort(j->derivatives.begin(), j->derivatives.end());
    return Expr::symbol(name(*j));
  };
  std::lock_guard lock(cache_->mutex);
  return derive(e, rule, cache_->total[l]);
}

Expr JetContext::total_derivative(const Expr &e, const std::vector<int> &dirs) const {
  Expr r = e;
  for (int l : dirs)
    r = total_derivative(r, l);
  return r;
}

VarTable JetContext::vars(int order, int tau_order) const {
  VarTable v = chart_.vars();
  for (int r = 0; r <= order; ++r) {
    std::vector<std::vector<int>> ms;
    multisets(dim_, r, ms);
    for (const auto &d : ms) {
      for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b) {
          JetIndex j{"s", {a, b}, d};
          v.add(name(j), VarRole::JetVariable, j);
        }
      for (int m = 0; m < dim_; ++m)
        for (int a = 0; a < dim_; ++a)
          for (int b = 0; b < dim_; ++b) {
            JetIndex j{"k", {m, a, b}, d};
            v.add(name(j), VarRole::JetVariable, j);
          }
    }
  }
  for (int r = 0; r <= tau_order; ++r) {
    std::vector<std::vector<int>> ms;
    multisets(dim_, r, ms);
    for (const auto &d : ms)
      for (int l = 0; l < dim_; ++l) {
        JetIndex j{"t", {l}, d};
        v.add(name(j), VarRole::JetVariable, j);
      }
  }
  return v;
}

ZeroTestOptions JetContext::zero_options(ZeroTestOptions base) const {
  const int n = dim_;
  base.sampler = [n](const std::string &s, std::uint64_t &state) -> std::optional<Rational> {
    auto j = parse_name(s);
    if (!j || j->base != "s" || j->order() != 0)
      return std::nullopt;
    const Rational r = random_rational(state);
    if (j->fixed[0] != j->fixed[1])
      return Rational(r / (8 * n));
    const Rational mag = 1 + Rational(abs(r));
    return j->fixed[0] == 0 ? mag : Rational(-mag);
  };
  if (n > 2)
    base.term_budget = 0;
  return base;
}

// ---------------------------------------------------------------------------

void LagrangianDensity::validate() const {
  if (!context)
    throw MismatchError("Lagrangian has no jet context");
  const VarTable v = context->vars(1);
  for (const auto &s : free_symbols(density))
    if (!v.contains(s))
      throw MismatchError("Lagrangian depends on '" + s + "', which is not a first-order jet variable");
}

LagrangianDensity parse_lagrangian(std::shared_ptr<const JetContext> ctx, std::string_view text,
                                   std::string name) {
  Expr e = parse(text, ctx->vars(1));
  LagrangianDensity L{std::move(ctx), std::move(e), std::move(name)};
  L.validate();
  return L;
}

LagrangianDensity hilbert_einstein(std::shared_ptr<const JetContext> ctx) {
  const JetContext &c = *ctx;
  const int n = c.dim();
  std::vector<Expr> t;
  for (int m = 0; m < n; ++m)
    for (int b = 0; b < n; ++b) {
      std::vector<Expr> ric;
      for (int l = 0; l < n; ++l)
        ric.push_back(c.curvature(l, m, l, b));
      t.push_back(c.sigma(m, b) * sum(ric));
    }
  Expr L = sum(t) * c.sqrt_sigma();
  return {std::move(ctx), std::move(L), "hilbert-einstein"};
}

LagrangianDensity yang_mills(std::shared_ptr<const JetContext> ctx) {
  const JetContext &c = *ctx;
  const int n = c.dim();
  std::vector<Expr> R(n * n * n * n);
  auto at = [n](int a, int b, int c2, int d) { return ((a * n + b) * n + c2) * n + d; };
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          R[at(l, m, a, b)] = c.curvature(l, m, a, b);
  // F^{λγ}_β^α = σ^{μλ}σ^{νγ}𝓡_{μν}^α_β, contracted with 𝓡_{λγ}^β_α.
  std::vector<Expr> t;
  for (int l = 0; l < n; ++l)
    for (int g = 0; g < n; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<Expr> f;
          for (int m = 0; m < n; ++m)
            for (int nu = 0; nu < n; ++nu)
              f.push_back(c.sigma(m, l) * c.sigma(nu, g) * R[at(m, nu, a, b)]);
          t.push_back(sum(f) * R[at(l, g, b, a)]);
        }
  Expr L = sum(t) * c.sqrt_sigma();
  return {std::move(ctx), std::move(L), "yang-mills"};
}

// ---------------------------------------------------------------------------

namespace {

Expr partial(const Expr &e, const std::set<std::string> &present, const Expr &var) {
  if (!present.count(var.name()))
    return Expr(0);
  return diff(e, var.name());
}

} // namespace

VariationalDerivatives euler_lagrange(const LagrangianDensity &L) {
  L.validate();
  const JetContext &c = *L.context;
  const int n = c.dim();
  const auto present = free_symbols(L.density);
  VariationalDerivatives out;
  out.dim = n;
  out.sigma.assign(n * n, Expr(0));
  out.k.assign(n * n * n, Expr(0));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<Expr> t{partial(L.density, present, c.sigma(a, b))};
      for (int l = 0; l < n; ++l) {
        Expr p = partial(L.density, present, c.sigma(a, b, {l}));
        if (!p.is_zero())
          t.push_back(-c.total_derivative(p, l));
      }
      Expr e = sum(t);
      if (a != b)
        e = e * Expr(Rational(1, 2));
      out.sigma[a * n + b] = e;
      out.sigma[b * n + a] = e;
    }
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::vector<Expr> t{partial(L.density, present, c.k(m, a, b))};
        for (int l = 0; l < n; ++l) {
          Expr p = partial(L.density, present, c.k(m, a, b, {l}));
          if (!p.is_zero())
            t.push_back(-c.total_derivative(p, l));
        }
        out.k[(m * n + a) * n + b] = sum(t);
      }
  return out;
}

std::vector<Expr> momenta(const LagrangianDensity &L) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const auto present = free_symbols(L.density);
  std::vector<Expr> pi;
  pi.reserve(n * n * n * n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          pi.push_back(partial(L.density, present, c.k(m, a, b, {l})));
  return pi;
}

bool IdentityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const IdentityCheck &c) { return c.verdict.zero(); });
}

} // namespace maf
