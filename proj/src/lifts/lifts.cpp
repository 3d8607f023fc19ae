#include "metaffine/lifts.hpp"

#include <functional>

namespace maf {

BaseVectorField::BaseVectorField(Chart c, std::vector<Expr> comps)
    : chart(std::move(c)), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != chart.dim())
    throw MismatchError("vector field needs one component per coordinate");
}

BaseVectorField BaseVectorField::zero(const Chart &c) {
  return BaseVectorField(c, std::vector<Expr>(c.dim(), Expr(0)));
}

BaseVectorField operator+(const BaseVectorField &a, const BaseVectorField &b) {
  if (!(a.chart == b.chart))
    throw MismatchError("vector fields live on different charts");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    out.push_back(a.components[i] + b.components[i]);
  return BaseVectorField(a.chart, std::move(out));
}

BaseVectorField scale(const BaseVectorField &a, const Expr &factor) {
  std::vector<Expr> out;
  for (const auto &c : a.components)
    out.push_back(c * factor);
  return BaseVectorField(a.chart, std::move(out));
}

BaseVectorField bracket(const BaseVectorField &a, const BaseVectorField &b) {
  if (!(a.chart == b.chart))
    throw MismatchError("vector fields live on different charts");
  const int n = a.chart.dim();
  std::vector<Expr> out;
  for (int l = 0; l < n; ++l) {
    std::vector<Expr> t;
    for (int m = 0; m < n; ++m) {
      t.push_back(a.components[m] * diff(b.components[l], a.chart.coordinate(m)));
      t.push_back(-(b.components[m] * diff(a.components[l], a.chart.coordinate(m))));
    }
    out.push_back(sum(t));
  }
  return BaseVectorField(a.chart, std::move(out));
}

// ---------------------------------------------------------------------------

std::string tensor_coordinate(const std::vector<int> &upper, const std::vector<int> &lower) {
  std::string s = "y";
  for (int i : upper)
    s += std::to_string(i);
  s += '_';
  for (int i : lower)
    s += std::to_string(i);
  return s;
}

std::string frame_coordinate(int mu, int a) {
  return "H" + std::to_string(mu) + "_" + std::to_string(a);
}

std::string connection_coordinate(int mu, int alpha, int beta) {
  return "k" + std::to_string(mu) + std::to_string(alpha) + std::to_string(beta);
}

std::string metric_coordinate(int alpha, int beta) {
  if (alpha > beta)
    std::swap(alpha, beta);
  return "s" + std::to_string(alpha) + std::to_string(beta);
}

Expr LiftedVectorField::apply(const Expr &f) const {
  std::vector<Expr> t;
  const int n = base.chart.dim();
  for (int l = 0; l < n; ++l)
    if (!base.components[l].is_zero())
      t.push_back(base.components[l] * diff(f, base.chart.coordinate(l)));
  for (std::size_t a = 0; a < fiber.size(); ++a)
    if (!fiber_components[a].is_zero())
      t.push_back(fiber_components[a] * diff(f, fiber[a]));
  return sum(t);
}

VarTable LiftedVectorField::vars() const {
  VarTable v = base.chart.vars();
  for (const auto &f : fiber)
    v.add(f, VarRole::FiberCoordinate);
  return v;
}

namespace {

Expr dtau(const BaseVectorField &tau, int alpha, int nu) {
  return diff(tau.components[alpha], tau.chart.coordinate(nu));
}

Expr ddtau(const BaseVectorField &tau, int alpha, int mu, int beta) {
  return diff(dtau(tau, alpha, mu), tau.chart.coordinate(beta));
}

void for_each_multi(int n, int len, const std::function<void(const std::vector<int> &)> &fn) {
  std::vector<int> idx(len, 0);
  for (;;) {
    fn(idx);
    int k = len - 1;
    while (k >= 0 && ++idx[k] == n)
      idx[k--] = 0;
    if (k < 0)
      return;
  }
}

std::vector<Expr> connection_part(const BaseVectorField &tau, std::vector<std::string> &names) {
  const int n = tau.chart.dim();
  std::vector<Expr> comps;
  auto k = [](int m, int a, int b) { return Expr::symbol(connection_coordinate(m, a, b)); };
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        names.push_back(connection_coordinate(m, a, b));
        std::vector<Expr> t{ddtau(tau, a, m, b)};
        for (int nu = 0; nu < n; ++nu) {
          t.push_back(dtau(tau, a, nu) * k(m, nu, b));
          t.push_back(-(dtau(tau, nu, b) * k(m, a, nu)));
          t.push_back(-(dtau(tau, nu, m) * k(nu, a, b)));
        }
        comps.push_back(sum(t));
      }
  return comps;
}

} // namespace

LiftedVectorField lift_tensor(const BaseVectorField &tau, int m, int k) {
  if (m < 0 || k < 0 || m + k < 1)
    throw MismatchError("tensor lift needs m + k >= 1");
  const int n = tau.chart.dim();
  LiftedVectorField out{BundleKind::Tensor, std::to_string(m) + "," + std::to_string(k), tau, {}, {}};
  for_each_multi(n, m + k, [&](const std::vector<int> &idx) {
    const std::vector<int> up(idx.begin(), idx.begin() + m);
    const std::vector<int> lo(idx.begin() + m, idx.end());
    std::vector<Expr> t;
    for (int i = 0; i < m; ++i)
      for (int nu = 0; nu < n; ++nu) {
        auto u2 = up;
        u2[i] = nu;
        t.push_back(dtau(tau, up[i], nu) * Expr::symbol(tensor_coordinate(u2, lo)));
      }
    for (int j = 0; j < k; ++j)
      for (int nu = 0; nu < n; ++nu) {
        auto l2 = lo;
        l2[j] = nu;
        t.push_back(-(dtau(tau, nu, lo[j]) * Expr::symbol(tensor_coordinate(up, l2))));
      }
    out.fiber.push_back(tensor_coordinate(up, lo));
    out.fiber_components.push_back(sum(t));
  });
  return out;
}

LiftedVectorField lift_frame(const BaseVectorField &tau) {
  const int n = tau.chart.dim();
  LiftedVectorField out{BundleKind::Frame, "frame", tau, {}, {}};
  for (int alpha = 0; alpha < n; ++alpha)
    for (int a = 0; a < n; ++a) {
      std::vector<Expr> t;
      for (int nu = 0; nu < n; ++nu)
        t.push_back(dtau(tau, alpha, nu) * Expr::symbol(frame_coordinate(nu, a)));
      out.fiber.push_back(frame_coordinate(alpha, a));
      out.fiber_components.push_back(sum(t));
    }
  return out;
}

LiftedVectorField lift_connection_bundle(const BaseVectorField &tau) {
  LiftedVectorField out{BundleKind::Connection, "connection", tau, {}, {}};
  out.fiber_components = connection_part(tau, out.fiber);
  return out;
}

LiftedVectorField lift_sigma_c(const BaseVectorField &tau) {
  const int n = tau.chart.dim();
  LiftedVectorField out{BundleKind::MetricConnection, "sigma-connection", tau, {}, {}};
  auto s = [](int a, int b) { return Expr::symbol(metric_coordinate(a, b)); };
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<Expr> t;
      for (int nu = 0; nu < n; ++nu) {
        t.push_back(s(nu, b) * dtau(tau, a, nu));
        t.push_back(s(a, nu) * dtau(tau, b, nu));
      }
      out.fiber.push_back(metric_coordinate(a, b));
      out.fiber_components.push_back(sum(t));
    }
  auto k = connection_part(tau, out.fiber);
  out.fiber_components.insert(out.fiber_components.end(), k.begin(), k.end());
  return out;
}

LiftedVectorField horizontal_lift(const BaseVectorField &tau, const WorldConnection &gamma) {
  if (!(tau.chart == gamma.chart()))
    throw MismatchError("vector field and connection live on different charts");
  const int n = tau.chart.dim();
  LiftedVectorField out{BundleKind::Tangent, "horizontal", tau, {}, {}};
  for (int m = 0; m < n; ++m) {
    std::vector<Expr> t;
    for (int l = 0; l < n; ++l)
      for (int nu = 0; nu < n; ++nu)
        if (!gamma(l, m, nu).is_zero())
          t.push_back(tau.components[l] * gamma(l, m, nu) *
                      Expr::symbol(tensor_coordinate({nu}, {})));
    out.fiber.push_back(tensor_coordinate({m}, {}));
    out.fiber_components.push_back(sum(t));
  }
  return out;
}

namespace {

void require_same(const LiftedVectorField &u, const LiftedVectorField &v) {
  if (u.bundle != v.bundle || u.bundle_tag != v.bundle_tag || u.fiber != v.fiber ||
      !(u.base.chart == v.base.chart))
    throw MismatchError("lifted vector fields live on different bundles");
}

} // namespace

LiftedVectorField bracket(const LiftedVectorField &u, const LiftedVectorField &v) {
  require_same(u, v);
  LiftedVectorField out{u.bundle, u.bundle_tag, bracket(u.base, v.base), u.fiber, {}};
  for (std::size_t a = 0; a < u.fiber.size(); ++a)
    out.fiber_components.push_back(u.apply(v.fiber_components[a]) -
                                   v.apply(u.fiber_components[a]));
  return out;
}

LiftedVectorField operator-(const LiftedVectorField &u, const LiftedVectorField &v) {
  require_same(u, v);
  LiftedVectorField out{u.bundle, u.bundle_tag, u.base + scale(v.base, Expr(-1)), u.fiber, {}};
  for (std::size_t a = 0; a < u.fiber.size(); ++a)
    out.fiber_components.push_back(u.fiber_components[a] - v.fiber_components[a]);
  return out;
}

ZeroVerdict zero_test(const LiftedVectorField &u, const ZeroTestOptions &opts) {
  std::vector<Expr> all = u.base.components;
  std::vector<std::string> labels;
  for (int l = 0; l < u.base.chart.dim(); ++l)
    labels.push_back("d/d" + u.base.chart.coordinate(l));
  all.insert(all.end(), u.fiber_components.begin(), u.fiber_components.end());
  for (const auto &f : u.fiber)
    labels.push_back("d/d" + f);
  return all_zero(all, labels, opts);
}

HorizontalDefect horizontal_defect(const WorldConnection &gamma, const ZeroTestOptions &opts) {
  const Chart &c = gamma.chart();
  const int n = c.dim();
  std::vector<BaseVectorField> candidates;
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> comps(n, Expr(0));
    comps[i] = Expr(1);
    candidates.emplace_back(c, comps);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> comps(n, Expr(0));
      comps[i] = c.x(j);
      candidates.emplace_back(c, comps);
    }
  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const auto &t1 = candidates[a];
      const auto &t2 = candidates[b];
      LiftedVectorField lhs = bracket(horizontal_lift(t1, gamma), horizontal_lift(t2, gamma));
      LiftedVectorField rhs = horizontal_lift(bracket(t1, t2), gamma);
      ZeroVerdict v = zero_test(lhs - rhs, opts);
      if (!v.zero())
        return {true, t1, t2, std::move(v)};
    }
  return {false, BaseVectorField::zero(c), BaseVectorField::zero(c), {}};
}

} // namespace maf
