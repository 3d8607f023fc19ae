#include "metaffine/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace maf {

Chart::Chart(int dim, std::vector<std::string> params) : params_(std::move(params)) {
  if (dim < 2)
    throw MismatchError("chart dimension must be at least 2");
  for (int i = 0; i < dim; ++i)
    coords_.push_back("x" + std::to_string(i));
}

Chart::Chart(std::vector<std::string> coordinates, std::vector<std::string> params)
    : coords_(std::move(coordinates)), params_(std::move(params)) {
  if (coords_.size() < 2)
    throw MismatchError("chart dimension must be at least 2");
  VarTable check = vars();
  if (check.size() != coords_.size() + params_.size())
    throw MismatchError("chart coordinate and parameter names must be distinct");
}

VarTable Chart::vars() const {
  VarTable v;
  for (const auto &c : coords_) {
    if (v.contains(c))
      throw MismatchError("duplicate coordinate '" + c + "'");
    v.add(c, VarRole::ChartCoordinate);
  }
  for (const auto &p : params_) {
    if (v.contains(p))
      throw MismatchError("duplicate parameter '" + p + "'");
    v.add(p, VarRole::Parameter);
  }
  return v;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--)
    r *= b;
  return r;
}

} // namespace

TensorField::TensorField(Chart chart, std::string layout, std::vector<IndexSymmetry> symmetries)
    : chart_(std::move(chart)), layout_(std::move(layout)), symmetries_(std::move(symmetries)) {
  for (char c : layout_)
    if (c != 'u' && c != 'd')
      throw MismatchError("tensor layout must use 'u' and 'd', got '" + layout_ + "'");
  data_.assign(ipow(static_cast<std::size_t>(dim()), layout_.size()), Expr(0));
}

TensorField::TensorField(Chart chart, std::string layout, std::vector<Expr> components,
                         std::vector<IndexSymmetry> symmetries)
    : TensorField(std::move(chart), std::move(layout), std::move(symmetries)) {
  if (components.size() != data_.size())
    throw MismatchError("tensor with layout '" + layout_ + "' needs " +
                        std::to_string(data_.size()) + " components, got " +
                        std::to_string(components.size()));
  data_ = std::move(components);
  check_symmetries();
}

int TensorField::contravariant() const {
  return static_cast<int>(std::count(layout_.begin(), layout_.end(), 'u'));
}
int TensorField::covariant() const {
  return static_cast<int>(std::count(layout_.begin(), layout_.end(), 'd'));
}

std::size_t TensorField::offset(const std::vector<int> &idx) const {
  if (idx.size() != layout_.size())
    throw MismatchError("wrong number of indices for layout '" + layout_ + "'");
  std::size_t o = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim())
      throw MismatchError("index out of range");
    o = o * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(i);
  }
  return o;
}

std::size_t TensorField::offset(std::initializer_list<int> idx) const {
  return offset(std::vector<int>(idx));
}

std::vector<int> TensorField::unflatten(std::size_t i) const {
  std::vector<int> idx(layout_.size());
  for (std::size_t k = layout_.size(); k-- > 0;) {
    idx[k] = static_cast<int>(i % static_cast<std::size_t>(dim()));
    i /= static_cast<std::size_t>(dim());
  }
  return idx;
}

void TensorField::check_symmetries(const ZeroTestOptions &opts) const {
  ZeroTestOptions quick = opts;
  quick.samples = std::min(opts.samples, 8);
  for (const auto &s : symmetries_) {
    if (s.first < 0 || s.second < 0 || s.first >= rank() || s.second >= rank() ||
        layout_[s.first] != layout_[s.second])
      throw MismatchError("invalid symmetry declaration for layout '" + layout_ + "'");
    for (std::size_t i = 0; i < data_.size(); ++i) {
      auto idx = unflatten(i);
      if (idx[s.first] >= idx[s.second])
        continue;
      std::swap(idx[s.first], idx[s.second]);
      const Expr &a = data_[i];
      const Expr &b = at(idx);
      const Expr diff = s.kind == Symmetry::Symmetric ? a - b : a + b;
      if (diff.is_zero())
        continue;
      if (!is_zero(diff, quick).zero())
        throw SymmetryError(std::string(s.kind == Symmetry::Symmetric ? "symmetry" : "antisymmetry") +
                            " of slots " + std::to_string(s.first) + "," +
                            std::to_string(s.second) + " fails: " + to_string(diff));
    }
    if (s.kind == Symmetry::Antisymmetric)
      for (std::size_t i = 0; i < data_.size(); ++i) {
        auto idx = unflatten(i);
        if (idx[s.first] == idx[s.second] && !data_[i].is_zero() &&
            !is_zero(data_[i], quick).zero())
          throw SymmetryError("antisymmetric diagonal component is nonzero: " +
                              to_string(data_[i]));
      }
  }
}

namespace {

void require_same(const TensorField &a, const TensorField &b) {
  if (!(a.chart() == b.chart()) || a.layout() != b.layout())
    throw MismatchError("tensor fields live on different charts or layouts");
}

} // namespace

TensorField operator+(const TensorField &a, const TensorField &b) {
  require_same(a, b);
  std::vector<Expr> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a.flat(i) + b.flat(i);
  return TensorField(a.chart(), a.layout(), std::move(out));
}

TensorField operator-(const TensorField &a, const TensorField &b) {
  require_same(a, b);
  std::vector<Expr> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a.flat(i) - b.flat(i);
  return TensorField(a.chart(), a.layout(), std::move(out));
}

TensorField scale(const TensorField &a, const Expr &factor) {
  std::vector<Expr> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a.flat(i) * factor;
  return TensorField(a.chart(), a.layout(), std::move(out), a.symmetries());
}

ZeroVerdict zero_test(const TensorField &t, const ZeroTestOptions &opts) {
  std::vector<std::string> labels;
  labels.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::string l = "(";
    auto idx = t.unflatten(i);
    for (std::size_t k = 0; k < idx.size(); ++k)
      l += (k ? "," : "") + std::to_string(idx[k]);
    labels.push_back(l + ")");
  }
  return all_zero(t.components(), labels, opts);
}

// ---------------------------------------------------------------------------
// Linear algebra

Expr determinant(const std::vector<std::vector<Expr>> &m) {
  const std::size_t n = m.size();
  if (n == 0)
    return Expr(1);
  if (n == 1)
    return m[0][0];
  if (n == 2)
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero())
      continue;
    std::vector<std::vector<Expr>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (c != j)
          minor[r - 1].push_back(m[r][c]);
    Expr t = m[0][j] * determinant(minor);
    terms.push_back(j % 2 ? -t : t);
  }
  return sum(terms);
}

std::vector<std::vector<Expr>> inverse(const std::vector<std::vector<Expr>> &m, Expr *det_out) {
  const std::size_t n = m.size();
  const Expr det = determinant(m);
  if (det_out)
    *det_out = det;
  if (det.is_zero())
    throw SingularError("matrix is singular");
  if (is_zero(det, with_samples({}, 8)).zero())
    throw SingularError("determinant vanishes identically: " + to_string(det));
  const Expr inv_det = pow(det, -1);
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<Expr>> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j)
          continue;
        minor.emplace_back();
        for (std::size_t c = 0; c < n; ++c)
          if (c != i)
            minor.back().push_back(m[r][c]);
      }
      const Expr cof = determinant(minor);
      out[i][j] = ((i + j) % 2 ? -cof : cof) * inv_det;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

const char *signature_name(Signature s) noexcept {
  return s == Signature::Lorentzian ? "lorentzian" : "riemannian";
}

int eta(int a, int b) noexcept {
  if (a != b)
    return 0;
  return a == 0 ? 1 : -1;
}

namespace {

std::string point_string(const std::vector<std::string> &names, const std::vector<Rational> &v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < names.size(); ++i)
    os << (i ? ", " : "") << names[i] << '=' << v[i].get_str();
  os << ')';
  return os.str();
}

std::vector<std::vector<Expr>> matrix_of(const TensorField &t) {
  const int n = t.dim();
  std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = t({i, j});
  return m;
}

} // namespace

void check_signature(const TensorField &g, Signature s, const ZeroTestOptions &opts) {
  const int n = g.dim();
  CompiledExprs tape(g.components());
  const auto &vars = tape.variables();
  std::uint64_t state = opts.seed ^ 0x51a7u;
  int good = 0;
  std::vector<Rational> point(vars.size());
  std::vector<double> fpoint(vars.size());
  for (int attempt = 0; attempt < 200 && good < 3; ++attempt) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      point[i] = random_rational(state);
      fpoint[i] = point[i].get_d();
    }
    auto vals = tape.eval_float(fpoint);
    if (!vals)
      continue;
    Eigen::MatrixXd m(n, n);
    bool finite = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m(i, j) = (*vals)[static_cast<std::size_t>(i * n + j)].value;
        finite = finite && std::isfinite(m(i, j));
      }
    if (!finite)
      continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int pos = 0, neg = 0;
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      if (std::fabs(ev(i)) <= 1e-12 * scale)
        degenerate = true;
      else if (ev(i) > 0)
        ++pos;
      else
        ++neg;
    }
    if (degenerate)
      continue;
    const bool ok = s == Signature::Lorentzian ? (pos == 1 && neg == n - 1) : pos == n;
    if (!ok)
      throw MismatchError(std::string("metric is not ") + signature_name(s) + " at " +
                          point_string(vars, point) + ": " + std::to_string(pos) +
                          " positive, " + std::to_string(neg) + " negative eigenvalues");
    ++good;
  }
  if (good == 0)
    throw SingularError("metric is degenerate at every sample point");
}

MetricField::MetricField(TensorField g, Signature signature, std::optional<TensorField> inverse_in,
                         const ZeroTestOptions &opts)
    : g_(std::move(g)), signature_(signature) {
  if (g_.layout() != "dd")
    throw MismatchError("metric must have layout 'dd'");
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g_({i, j}) != g_({j, i}) && !is_zero(g_({i, j}) - g_({j, i}), opts).zero())
        throw SymmetryError("metric is not symmetric");
  g_ = TensorField(g_.chart(), "dd", g_.components(), {{0, 1, Symmetry::Symmetric}});
  const auto m = matrix_of(g_);
  if (inverse_in) {
    if (inverse_in->layout() != "uu" || !(inverse_in->chart() == g_.chart()))
      throw MismatchError("metric inverse must have layout 'uu' on the same chart");
    ginv_ = TensorField(g_.chart(), "uu", inverse_in->components(), {{0, 1, Symmetry::Symmetric}});
    det_ = maf::determinant(m);
    std::vector<Expr> residual;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<Expr> t;
        for (int k = 0; k < n; ++k)
          t.push_back(g_({i, k}) * ginv_({k, j}));
        residual.push_back(sum(t) - Expr(i == j ? 1 : 0));
      }
    if (!all_zero(residual, {}, opts).zero())
      throw SingularError("supplied inverse metric does not invert g");
  } else {
    auto inv = inverse(m, &det_);
    std::vector<Expr> comps;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        comps.push_back(i <= j ? inv[i][j] : inv[j][i]);
    ginv_ = TensorField(g_.chart(), "uu", std::move(comps), {{0, 1, Symmetry::Symmetric}});
  }
  if (det_.is_zero())
    throw SingularError("metric determinant vanishes");
  check_signature(g_, signature_, opts);
}

MetricField MetricField::diagonal(const Chart &chart, const std::vector<Expr> &entries,
                                  Signature signature) {
  const int n = chart.dim();
  if (static_cast<int>(entries.size()) != n)
    throw MismatchError("diagonal metric needs one entry per coordinate");
  TensorField g(chart, "dd");
  TensorField gi(chart, "uu");
  for (int i = 0; i < n; ++i) {
    if (entries[i].is_zero())
      throw SingularError("diagonal metric entry " + std::to_string(i) + " is zero");
    g.set({i, i}, entries[i]);
    gi.set({i, i}, pow(entries[i], -1));
  }
  return MetricField(std::move(g), signature, std::move(gi));
}

MetricField MetricField::minkowski(const Chart &chart) {
  std::vector<Expr> e;
  for (int i = 0; i < chart.dim(); ++i)
    e.emplace_back(eta(i, i));
  return diagonal(chart, e, Signature::Lorentzian);
}

MetricField MetricField::euclidean(const Chart &chart) {
  return diagonal(chart, std::vector<Expr>(chart.dim(), Expr(1)), Signature::Riemannian);
}

// ---------------------------------------------------------------------------

TetradField::TetradField(const Chart &chart, std::vector<std::vector<Expr>> coframe,
                         const ZeroTestOptions &)
    : chart_(chart), co_(std::move(coframe)) {
  const auto n = static_cast<std::size_t>(chart_.dim());
  if (co_.size() != n)
    throw MismatchError("tetrad needs dim rows");
  for (const auto &row : co_)
    if (row.size() != n)
      throw MismatchError("tetrad needs dim columns");
  try {
    fr_ = inverse(co_);
  } catch (const SingularError &) {
    throw SingularError("tetrad is singular");
  }
  // inverse() returns (h^{-1})[μ][a] = h^μ_a
}

TetradField TetradField::identity(const Chart &chart) {
  const int n = chart.dim();
  std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = Expr(i == j ? 1 : 0);
  return TetradField(chart, std::move(m));
}

// ---------------------------------------------------------------------------

WorldConnection::WorldConnection(Chart chart) : chart_(std::move(chart)) {
  const auto d = static_cast<std::size_t>(dim());
  data_.assign(d * d * d, Expr(0));
}

WorldConnection::WorldConnection(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), data_(std::move(components)) {
  const auto d = static_cast<std::size_t>(dim());
  if (data_.size() != d * d * d)
    throw MismatchError("connection needs dim^3 components");
}

TensorField WorldConnection::as_array() const { return TensorField(chart_, "dud", data_); }

ZeroVerdict zero_test(const WorldConnection &a, const WorldConnection &b,
                      const ZeroTestOptions &opts) {
  if (!(a.chart() == b.chart()))
    throw MismatchError("connections live on different charts");
  return zero_test(a.as_array() - b.as_array(), opts);
}

} // namespace maf
