#pragma once

// Classical Komar superpotential √|g|(g^{λν}∇_ντ^μ − g^{μν}∇_ντ^λ) in doubles,
// with textbook Γ from central differences of an explicit metric.

#include "metaffine/variational.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace maf_test {

struct KomarOracle {
  int n;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd &)> metric;
  std::function<Eigen::VectorXd(const Eigen::VectorXd &)> field;

  template <class F> auto partial(F f, const Eigen::VectorXd &x, int l) const {
    const double h = 1e-6;
    Eigen::VectorXd p = x, m = x;
    p[l] += h;
    m[l] -= h;
    return ((f(p) - f(m)) / (2 * h)).eval();
  }

  // (library, classical) for every U^{μλ}, U indexed μ*n + λ.
  std::vector<std::pair<double, double>> compare(const maf::JetContext &c, const std::vector<maf::Expr> &U,
                                                 const Eigen::VectorXd &x) const {
    auto ginv = [&](const Eigen::VectorXd &y) { return Eigen::MatrixXd(metric(y).inverse()); };
    const Eigen::MatrixXd g = metric(x), gi = ginv(x);
    std::vector<Eigen::MatrixXd> dg, dgi;
    std::vector<Eigen::VectorXd> dt;
    for (int l = 0; l < n; ++l) {
      dg.push_back(partial(metric, x, l));
      dgi.push_back(partial(ginv, x, l));
      dt.push_back(partial(field, x, l));
    }
    auto Gamma = [&](int a, int b, int cc) {
      double s = 0;
      for (int d = 0; d < n; ++d)
        s += gi(a, d) * (dg[b](d, cc) + dg[cc](d, b) - dg[d](b, cc));
      return 0.5 * s;
    };
    const Eigen::VectorXd tau = field(x);

    maf::FloatPoint p;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        p[c.sigma(a, b).name()] = gi(a, b);
        for (int l = 0; l < n; ++l)
          p[c.sigma(a, b, {l}).name()] = dgi[l](a, b);
      }
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          p[c.k(m, a, b).name()] = -Gamma(a, m, b);
    for (int a = 0; a < n; ++a) {
      p[c.tau(a).name()] = tau[a];
      for (int l = 0; l < n; ++l)
        p[c.tau(a, {l}).name()] = dt[l][a];
    }

    auto nabla = [&](int nu, int a) {
      double s = dt[nu][a];
      for (int sg = 0; sg < n; ++sg)
        s += Gamma(a, nu, sg) * tau[sg];
      return s;
    };
    const double root = std::sqrt(std::abs(g.determinant()));
    std::vector<std::pair<double, double>> out;
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l) {
        double ref = 0;
        for (int nu = 0; nu < n; ++nu)
          ref += gi(l, nu) * nabla(nu, m) - gi(m, nu) * nabla(nu, l);
        out.emplace_back(maf::evaluate_float(U[m * n + l], p), ref * root);
      }
    return out;
  }
};

} // namespace maf_test
