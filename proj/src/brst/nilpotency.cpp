#include "metaffine/brst.hpp"

#include <algorithm>

namespace maf {

bool NilpotencyReport::passed() const { return failures() == 0; }

std::size_t NilpotencyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const NilpotencyEntry &e) { return !e.zero; }));
}

std::vector<std::string> nilpotency_generators(const JetContext &c) {
  const int n = c.dim();
  std::vector<std::string> g;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      g.push_back(c.sigma(a, b).name());
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int l = 0; l < n; ++l)
        g.push_back(c.sigma(a, b, {l}).name());
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g.push_back(c.k(m, a, b).name());
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          g.push_back(c.k(m, a, b, {l}).name());
  for (int l = 0; l < n; ++l)
    g.push_back(ghost_name(l));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      g.push_back(ghost_name(l, {m}));
  return g;
}

NilpotencyReport nilpotency_check(const GradedDerivation &d,
                                  const std::vector<std::string> &generators) {
  NilpotencyReport r{d.name(), {}};
  for (const auto &g : generators) {
    GradedPoly sq = d.apply(d.image(g)).expanded();
    const bool zero = sq.empty();
    r.entries.push_back({g, zero, std::move(sq)});
  }
  return r;
}

GradedPoly extended_lagrangian(const LagrangianDensity &L) {
  const JetContext &c = *L.context;
  const int n = c.dim();
  const GradedDerivation u = gauge_operator(L.context);
  GradedPoly r(L.density);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r = r + u.image(c.sigma(a, b).name()) * GradedPoly::odd(sigma_antifield_name(a, b));
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        r = r + u.image(c.k(m, a, b).name()) * GradedPoly::odd(connection_antifield_name(m, a, b));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      r = r + GradedPoly::odd(ghost_name(l, {m})) * GradedPoly::odd(ghost_name(m)) *
                  GradedPoly(Expr::symbol(ghost_antifield_name(l)));
  return r;
}

} // namespace maf
