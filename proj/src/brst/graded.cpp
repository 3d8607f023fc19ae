#include "metaffine/brst.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace maf {

namespace {

struct GhostIndex {
  int l;
  std::vector<int> dirs;
};

std::optional<GhostIndex> parse_ghost(const std::string &s) {
  if (s.size() < 2 || s[0] != 'c' || !std::isdigit(static_cast<unsigned char>(s[1])))
    return std::nullopt;
  GhostIndex g{s[1] - '0', {}};
  if (s.size() == 2)
    return g;
  if (s.compare(2, 2, "_d") != 0 || s.size() == 4)
    return std::nullopt;
  for (std::size_t p = 4; p < s.size(); ++p) {
    if (!std::isdigit(static_cast<unsigned char>(s[p])))
      return std::nullopt;
    g.dirs.push_back(s[p] - '0');
  }
  return g;
}

bool starts_with(const std::string &s, const char *prefix) { return s.rfind(prefix, 0) == 0; }

bool is_antifield(const std::string &s) {
  return starts_with(s, "sbar") || starts_with(s, "kbar") || starts_with(s, "cbar");
}

// Product of two sorted words; returns the sign (0 on a repeated generator).
int merge_words(const GradedPoly::Word &a, const GradedPoly::Word &b, GradedPoly::Word &out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  long swaps = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      swaps += static_cast<long>(a.size() - i);
      out.push_back(b[j++]);
    } else {
      return 0;
    }
  }
  return swaps % 2 == 0 ? 1 : -1;
}

} // namespace

bool is_odd_generator(const std::string &name) {
  return parse_ghost(name).has_value() || starts_with(name, "sbar") || starts_with(name, "kbar");
}

int ghost_number_of(const std::string &name) {
  if (parse_ghost(name))
    return 1;
  if (starts_with(name, "sbar") || starts_with(name, "kbar"))
    return -1;
  if (starts_with(name, "cbar"))
    return -2;
  return 0;
}

std::string ghost_name(int l, std::vector<int> dirs) {
  std::sort(dirs.begin(), dirs.end());
  std::string s = "c" + std::to_string(l);
  if (!dirs.empty()) {
    s += "_d";
    for (int d : dirs)
      s += std::to_string(d);
  }
  return s;
}

std::string sigma_antifield_name(int a, int b) {
  if (a > b)
    std::swap(a, b);
  return "sbar" + std::to_string(a) + std::to_string(b);
}

std::string connection_antifield_name(int mu, int a, int b) {
  return "kbar" + std::to_string(mu) + std::to_string(a) + std::to_string(b);
}

std::string ghost_antifield_name(int l) { return "cbar" + std::to_string(l); }

// ---------------------------------------------------------------------------

GradedPoly::GradedPoly(const Expr &even) {
  if (!even.is_zero())
    terms_[{}] = even;
}

GradedPoly GradedPoly::odd(const std::string &name) {
  if (!is_odd_generator(name))
    throw MismatchError("'" + name + "' is not an odd generator");
  GradedPoly p;
  p.terms_[{name}] = Expr(1);
  return p;
}

GradedPoly GradedPoly::word(const std::vector<std::string> &names) {
  GradedPoly p(Expr(1));
  for (const auto &n : names)
    p = p * odd(n);
  return p;
}

void GradedPoly::add_term(const Word &w, const Expr &coefficient) {
  if (coefficient.is_zero())
    return;
  auto [it, inserted] = terms_.emplace(w, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

GradedPoly operator+(const GradedPoly &a, const GradedPoly &b) {
  GradedPoly r = a;
  for (const auto &[w, c] : b.terms_)
    r.add_term(w, c);
  return r;
}

GradedPoly operator-(const GradedPoly &a) {
  GradedPoly r;
  for (const auto &[w, c] : a.terms_)
    r.terms_.emplace(w, -c);
  return r;
}

GradedPoly operator-(const GradedPoly &a, const GradedPoly &b) { return a + (-b); }

GradedPoly operator*(const GradedPoly &a, const GradedPoly &b) {
  GradedPoly r;
  GradedPoly::Word w;
  for (const auto &[wa, ca] : a.terms_)
    for (const auto &[wb, cb] : b.terms_) {
      const int s = merge_words(wa, wb, w);
      if (s == 0)
        continue;
      r.add_term(w, s > 0 ? ca * cb : -(ca * cb));
    }
  return r;
}

GradedPoly GradedPoly::expanded(std::size_t term_budget) const {
  GradedPoly r;
  for (const auto &[w, c] : terms_) {
    Expr e = expand(c, term_budget);
    if (!e.is_zero())
      r.terms_.emplace(w, std::move(e));
  }
  return r;
}

bool GradedPoly::is_zero() const { return expanded().empty(); }

std::set<int> GradedPoly::parities() const {
  std::set<int> out;
  for (const auto &[w, c] : terms_)
    out.insert(static_cast<int>(w.size() % 2));
  return out;
}

namespace {

// Ghost number carried by even factors (c̄) of one expanded term.
int even_ghost_number(const Expr &term) {
  std::vector<std::pair<Expr, int>> factors;
  if (term.kind() == NodeKind::Product) {
    for (const auto &f : term.factors())
      factors.emplace_back(f.kind() == NodeKind::Power ? f.base() : f,
                           f.kind() == NodeKind::Power ? f.exponent() : 1);
  } else if (term.kind() == NodeKind::Power) {
    factors.emplace_back(term.base(), term.exponent());
  } else {
    factors.emplace_back(term, 1);
  }
  int g = 0;
  for (const auto &[b, k] : factors) {
    if (b.is_symbol())
      g += ghost_number_of(b.name()) * k;
    else {
      for (const auto &s : free_symbols(b))
        if (ghost_number_of(s) != 0)
          throw MismatchError("antifield inside a non-polynomial factor");
    }
  }
  return g;
}

} // namespace

std::set<int> GradedPoly::ghost_numbers() const {
  std::set<int> out;
  for (const auto &[w, c] : terms_) {
    int g = 0;
    for (const auto &s : w)
      g += ghost_number_of(s);
    bool has_even_ghosts = false;
    for (const auto &s : free_symbols(c))
      has_even_ghosts = has_even_ghosts || ghost_number_of(s) != 0;
    if (!has_even_ghosts) {
      out.insert(g);
      continue;
    }
    const Expr e = expand(c);
    if (e.kind() == NodeKind::Sum) {
      if (sgn(e.constant_term()) != 0)
        out.insert(g);
      for (const auto &t : e.terms())
        out.insert(g + even_ghost_number(t));
    } else if (!e.is_zero()) {
      out.insert(g + even_ghost_number(e));
    }
  }
  return out;
}

GradedPoly GradedPoly::drop_antifields() const {
  GradedPoly r;
  for (const auto &[w, c] : terms_) {
    if (std::any_of(w.begin(), w.end(), is_antifield))
      continue;
    std::map<std::string, Expr> zero;
    for (const auto &s : free_symbols(c))
      if (is_antifield(s))
        zero[s] = Expr(0);
    r.add_term(w, substitute(c, zero));
  }
  return r;
}

std::string GradedPoly::str() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[w, c] : terms_) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (const auto &s : w)
      os << "*" << s;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

GradedPoly total_derivative(const JetContext &ctx, const GradedPoly &p, int l) {
  GradedPoly r;
  for (const auto &[w, c] : p.terms()) {
    for (const auto &s : free_symbols(c))
      if (is_antifield(s))
        throw MismatchError("total derivative of antifield '" + s + "' is not represented");
    r = r + GradedPoly(ctx.total_derivative(c, l)) * GradedPoly::word(w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto g = parse_ghost(w[i]);
      if (!g)
        throw MismatchError("total derivative of antifield '" + w[i] + "' is not represented");
      g->dirs.push_back(l);
      GradedPoly::Word pre(w.begin(), w.begin() + static_cast<long>(i));
      GradedPoly::Word post(w.begin() + static_cast<long>(i) + 1, w.end());
      r = r + GradedPoly(c) * GradedPoly::word(pre) * GradedPoly::odd(ghost_name(g->l, g->dirs)) *
                  GradedPoly::word(post);
    }
  }
  return r;
}

struct GradedDerivation::Memo {
  std::mutex mutex;
  std::unordered_map<std::string, GradedPoly> images;
};

GradedDerivation::GradedDerivation(std::string name, int parity, Rule rule)
    : name_(std::move(name)), parity_(parity % 2), rule_(std::move(rule)),
      memo_(std::make_shared<Memo>()) {}

GradedPoly GradedDerivation::image(const std::string &generator) const {
  {
    std::lock_guard lock(memo_->mutex);
    if (auto it = memo_->images.find(generator); it != memo_->images.end())
      return it->second;
  }
  GradedPoly img = rule_(*this, generator);
  std::lock_guard lock(memo_->mutex);
  return memo_->images.emplace(generator, std::move(img)).first->second;
}

GradedPoly GradedDerivation::apply(const GradedPoly &p) const {
  GradedPoly r;
  for (const auto &[w, c] : p.terms()) {
    const GradedPoly tail = GradedPoly::word(w);
    for (const auto &s : free_symbols(c)) {
      GradedPoly img = image(s);
      if (img.empty())
        continue;
      r = r + GradedPoly(diff(c, s)) * img * tail;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      GradedPoly img = image(w[i]);
      if (img.empty())
        continue;
      GradedPoly::Word pre(w.begin(), w.begin() + static_cast<long>(i));
      GradedPoly::Word post(w.begin() + static_cast<long>(i) + 1, w.end());
      const bool flip = parity_ == 1 && i % 2 == 1;
      GradedPoly t = GradedPoly(c) * GradedPoly::word(pre) * img * GradedPoly::word(post);
      r = flip ? r - t : r + t;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

GradedPoly gauge_base(const JetContext &c, const std::string &s) {
  const int n = c.dim();
  auto j = JetContext::parse_name(s);
  if (!j)
    return {};
  auto cg = [](int l, std::vector<int> d) { return GradedPoly::odd(ghost_name(l, std::move(d))); };
  GradedPoly r;
  if (j->base == "s") {
    const int a = j->fixed[0], b = j->fixed[1];
    for (int nu = 0; nu < n; ++nu) {
      r = r + GradedPoly(c.sigma(nu, b)) * cg(a, {nu});
      r = r + GradedPoly(c.sigma(a, nu)) * cg(b, {nu});
      r = r - GradedPoly(c.sigma(a, b, {nu})) * cg(nu, {});
    }
  } else if (j->base == "k") {
    const int m = j->fixed[0], a = j->fixed[1], b = j->fixed[2];
    r = cg(a, {m, b});
    for (int nu = 0; nu < n; ++nu) {
      r = r + GradedPoly(c.k(m, nu, b)) * cg(a, {nu});
      r = r - GradedPoly(c.k(m, a, nu)) * cg(nu, {b});
      r = r - GradedPoly(c.k(nu, a, b)) * cg(nu, {m});
      r = r - GradedPoly(c.k(m, a, b, {nu})) * cg(nu, {});
    }
  }
  return r;
}

// Order-zero images from the formulas, jets by prolongation d_λ.
GradedDerivation make_derivation(std::string name, std::shared_ptr<const JetContext> ctx,
                                 bool ghost_term) {
  GradedDerivation::Rule rule = [ctx, ghost_term](const GradedDerivation &d,
                                                  const std::string &s) -> GradedPoly {
    if (auto j = JetContext::parse_name(s)) {
      if (j->base == "t")
        return {};
      if (j->derivatives.empty())
        return gauge_base(*ctx, s);
      const int l = j->derivatives.back();
      j->derivatives.pop_back();
      return total_derivative(*ctx, d.image(JetContext::name(*j)), l);
    }
    auto g = parse_ghost(s);
    if (!g || !ghost_term)
      return {};
    if (!g->dirs.empty()) {
      const int l = g->dirs.back();
      g->dirs.pop_back();
      return total_derivative(*ctx, d.image(ghost_name(g->l, g->dirs)), l);
    }
    GradedPoly r;
    for (int m = 0; m < ctx->dim(); ++m)
      r = r + GradedPoly::odd(ghost_name(g->l, {m})) * GradedPoly::odd(ghost_name(m));
    return r;
  };
  return GradedDerivation(std::move(name), 1, std::move(rule));
}

} // namespace

GradedDerivation gauge_operator(std::shared_ptr<const JetContext> ctx) {
  return make_derivation("u", std::move(ctx), false);
}

GradedDerivation brst_operator(std::shared_ptr<const JetContext> ctx) {
  return make_derivation("c", std::move(ctx), true);
}

} // namespace maf
