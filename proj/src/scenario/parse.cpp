#include "internal.hpp"

#include <fstream>
#include <sstream>

namespace maf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string &what, std::size_t line, std::size_t column) {
  throw ParseError(what, 0, line, column);
}

struct Entry {
  std::string key;
  Setting setting;
  std::size_t key_column;
};

struct Section {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

struct ListItem {
  std::string text;
  std::size_t column;
};

std::vector<ListItem> split(const Setting &s, char sep) {
  std::vector<ListItem> out;
  std::size_t start = 0;
  const std::string &v = s.value;
  for (std::size_t i = 0; i <= v.size(); ++i) {
    if (i == v.size() || v[i] == sep) {
      const std::string piece = v.substr(start, i - start);
      const auto lead = piece.find_first_not_of(" \t");
      if (lead != std::string::npos)
        out.push_back({trim(piece), s.column + start + lead});
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> words(const std::string &v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

Expr parse_at(const std::function<Expr(std::string_view)> &parser, const std::string &text,
              std::size_t line, std::size_t column) {
  try {
    return parser(text);
  } catch (const ParseError &e) {
    fail(e.what(), line, column + e.offset());
  } catch (const UnknownIdentifierError &e) {
    fail(e.what(), line, column + e.offset());
  }
}

Expr parse_expr(const Chart &chart, const std::string &text, std::size_t line, std::size_t column) {
  return parse_at([&](std::string_view t) { return chart.parse(t); }, text, line, column);
}

std::vector<int> parse_index(const Entry &e, int rank, int dim) {
  const std::string &k = e.key;
  if (k.size() < 2 || k.front() != '(' || k.back() != ')')
    fail("unknown key '" + k + "'", e.setting.line, e.key_column);
  std::vector<int> idx;
  for (const auto &w : words(k.substr(1, k.size() - 2))) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(w, &used);
      if (used != w.size())
        throw std::invalid_argument(w);
    } catch (const std::exception &) {
      fail("bad index '" + w + "'", e.setting.line, e.key_column);
    }
    if (v < 0 || v >= dim)
      fail("index " + w + " out of range", e.setting.line, e.key_column);
    idx.push_back(v);
  }
  if (static_cast<int>(idx.size()) != rank)
    fail("expected " + std::to_string(rank) + " indices", e.setting.line, e.key_column);
  return idx;
}

std::size_t flat_index(const std::vector<int> &idx, int dim) {
  std::size_t f = 0;
  for (int i : idx)
    f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return f;
}

/// Fills a dense rank-`rank` array from diag/components/(i,…) entries.
std::vector<Expr> components(const Section &s, const Chart &chart, int rank, bool symmetric,
                             const std::vector<std::string> &extra_keys) {
  const int n = chart.dim();
  std::size_t size = 1;
  for (int r = 0; r < rank; ++r)
    size *= static_cast<std::size_t>(n);
  std::vector<Expr> out(size, Expr(0));
  for (const auto &e : s.entries) {
    if (std::find(extra_keys.begin(), extra_keys.end(), e.key) != extra_keys.end())
      continue;
    const auto &st = e.setting;
    if (e.key == "diag") {
      if (rank != 2)
        fail("diag needs a rank-2 object", st.line, e.key_column);
      const auto items = split(st, ';');
      if (static_cast<int>(items.size()) != n)
        fail("diag needs " + std::to_string(n) + " entries", st.line, st.column);
      for (int i = 0; i < n; ++i)
        out[flat_index({i, i}, n)] = parse_expr(chart, items[i].text, st.line, items[i].column);
    } else if (e.key == "components") {
      const auto items = split(st, ';');
      if (items.size() != size)
        fail("components needs " + std::to_string(size) + " entries", st.line, st.column);
      for (std::size_t i = 0; i < size; ++i)
        out[i] = parse_expr(chart, items[i].text, st.line, items[i].column);
    } else {
      const auto idx = parse_index(e, rank, n);
      const Expr v = parse_expr(chart, st.value, st.line, st.column);
      out[flat_index(idx, n)] = v;
      if (symmetric)
        out[flat_index({idx[1], idx[0]}, n)] = v;
    }
  }
  return out;
}

const Entry *find(const Section &s, const std::string &key) {
  for (const auto &e : s.entries)
    if (e.key == key)
      return &e;
  return nullptr;
}

class Builder {
public:
  Scenario::Impl impl;

  void finish(const Section &s) {
    if (s.kind == "chart")
      return build_chart(s);
    if (s.kind == "task")
      return build_task(s);
    static const std::map<std::string, ObjectKind> kinds{
        {"metric", ObjectKind::Metric},     {"tetrad", ObjectKind::Tetrad},
        {"connection", ObjectKind::Connection}, {"vector", ObjectKind::Vector},
        {"oneform", ObjectKind::OneForm},   {"spinor", ObjectKind::Spinor},
        {"lagrangian", ObjectKind::Lagrangian}};
    const auto it = kinds.find(s.kind);
    if (it == kinds.end())
      fail("unknown section [" + s.kind + "]", s.line, 2);
    if (s.name.empty())
      fail("section [" + s.kind + "] needs a name", s.line, 2);
    if (impl.objects.count(s.name))
      fail("duplicate name '" + s.name + "'", s.line, 2);
    if (it->second != ObjectKind::Lagrangian && !impl.chart)
      fail("[chart] must precede [" + s.kind + "]", s.line, 1);
    try {
      impl.objects.emplace(s.name, build_object(it->second, s));
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      fail(std::string(s.kind) + " " + s.name + ": " + e.what(), s.line, 1);
    }
  }

private:
  void build_chart(const Section &s) {
    if (impl.chart)
      fail("duplicate [chart]", s.line, 1);
    std::vector<std::string> params;
    if (const auto *p = find(s, "params"))
      params = words(p->setting.value);
    const auto *coords = find(s, "coords");
    const auto *dim = find(s, "dim");
    for (const auto &e : s.entries)
      if (e.key != "params" && e.key != "coords" && e.key != "dim")
        fail("unknown key '" + e.key + "'", e.setting.line, e.key_column);
    if (coords) {
      impl.chart = Chart(words(coords->setting.value), params);
      if (dim && std::to_string(impl.chart->dim()) != dim->setting.value)
        fail("dim disagrees with coords", dim->setting.line, dim->setting.column);
    } else if (dim) {
      int n = 0;
      try {
        n = std::stoi(dim->setting.value);
      } catch (const std::exception &) {
        fail("bad dim", dim->setting.line, dim->setting.column);
      }
      if (n < 1 || n > 8)
        fail("dim must be between 1 and 8", dim->setting.line, dim->setting.column);
      impl.chart = Chart(n, params);
    } else {
      fail("[chart] needs coords or dim", s.line, 1);
    }
  }

  Object build_object(ObjectKind k, const Section &s) {
    if (k == ObjectKind::Lagrangian)
      return build_lagrangian(s);
    const Chart &c = *impl.chart;
    const int n = c.dim();
    switch (k) {
    case ObjectKind::Metric: {
      Signature sig = Signature::Lorentzian;
      if (const auto *e = find(s, "signature")) {
        if (e->setting.value == "riemannian")
          sig = Signature::Riemannian;
        else if (e->setting.value != "lorentzian")
          fail("signature must be lorentzian or riemannian", e->setting.line, e->setting.column);
      }
      return MetricField(TensorField(c, "dd", components(s, c, 2, true, {"signature"})), sig);
    }
    case ObjectKind::Tetrad: {
      const auto flat = components(s, c, 2, false, {});
      std::vector<std::vector<Expr>> co(n, std::vector<Expr>(n));
      for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m)
          co[a][m] = flat[flat_index({a, m}, n)];
      return TetradField(c, co);
    }
    case ObjectKind::Connection: {
      if (const auto *e = find(s, "christoffel")) {
        if (s.entries.size() != 1)
          fail("christoffel cannot be combined with components", e->setting.line, 1);
        const auto it = impl.objects.find(e->setting.value);
        if (it == impl.objects.end() || kind_of(it->second) != ObjectKind::Metric)
          fail("'" + e->setting.value + "' is not a declared metric", e->setting.line, e->setting.column);
        return christoffel(std::get<MetricField>(it->second));
      }
      return WorldConnection(c, components(s, c, 3, false, {}));
    }
    case ObjectKind::Vector:
      return BaseVectorField(c, components(s, c, 1, false, {}));
    case ObjectKind::OneForm:
      return OneForm{TensorField(c, "d", components(s, c, 1, false, {}))};
    case ObjectKind::Spinor: {
      if (n != 4)
        fail("spinor needs a 4-dimensional chart", s.line, 1);
      SpinorFieldExpr psi{c, {}};
      for (auto &p : psi.psi)
        p = {Expr(0), Expr(0)};
      for (const auto &e : s.entries) {
        if (e.key == "re" || e.key == "im") {
          const auto items = split(e.setting, ';');
          if (items.size() != 4)
            fail(e.key + " needs 4 entries", e.setting.line, e.setting.column);
          for (int i = 0; i < 4; ++i) {
            const Expr v = parse_expr(c, items[i].text, e.setting.line, items[i].column);
            (e.key == "re" ? psi.psi[i].re : psi.psi[i].im) = v;
          }
        } else {
          const auto idx = parse_index(e, 1, 4);
          psi.psi[idx[0]].re = parse_expr(c, e.setting.value, e.setting.line, e.setting.column);
        }
      }
      return psi;
    }
    case ObjectKind::Lagrangian:
      break;
    }
    fail("unreachable", s.line, 1);
  }

  Object build_lagrangian(const Section &s) {
    int dim = 4;
    if (const auto *e = find(s, "dim")) {
      try {
        dim = std::stoi(e->setting.value);
      } catch (const std::exception &) {
        fail("bad dim", e->setting.line, e->setting.column);
      }
      if (dim < 1 || dim > 4)
        fail("lagrangian dim must be between 1 and 4", e->setting.line, e->setting.column);
    }
    auto ctx = std::make_shared<const JetContext>(dim);
    const auto *builtin = find(s, "builtin");
    const auto *density = find(s, "density");
    if (builtin && density)
      fail("builtin and density are exclusive", density->setting.line, 1);
    if (builtin) {
      if (builtin->setting.value == "hilbert_einstein")
        return hilbert_einstein(ctx);
      if (builtin->setting.value == "yang_mills")
        return yang_mills(ctx);
      fail("unknown builtin '" + builtin->setting.value + "'", builtin->setting.line,
           builtin->setting.column);
    }
    if (!density)
      fail("lagrangian needs builtin or density", s.line, 1);
    std::optional<LagrangianDensity> L;
    parse_at(
        [&](std::string_view t) {
          L = parse_lagrangian(ctx, t, s.name);
          return L->density;
        },
        density->setting.value, density->setting.line, density->setting.column);
    return *L;
  }

  void build_task(const Section &s) {
    if (s.name.empty())
      fail("[task] needs an id", s.line, 2);
    for (const auto &t : impl.tasks)
      if (t.id == s.name)
        fail("duplicate task id '" + s.name + "'", s.line, 2);
    TaskSpec t;
    t.id = s.name;
    t.line = s.line;
    const Entry *op = find(s, "op");
    if (!op)
      fail("task '" + s.name + "' needs op", s.line, 1);
    t.op = op->setting.value;
    const auto &table = operation_table();
    const auto it = table.find(t.op);
    if (it == table.end())
      fail("unknown operation '" + t.op + "'", op->setting.line, op->setting.column);
    if (const auto *a = find(s, "args"))
      t.args = words(a->setting.value);
    const auto &sig = it->second;
    const std::size_t line = find(s, "args") ? find(s, "args")->setting.line : op->setting.line;
    if (t.args.size() > sig.args.size() || t.args.size() + sig.optional < sig.args.size())
      fail(t.op + " takes " + std::to_string(sig.args.size()) + " argument(s)", line, 1);
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      const auto obj = impl.objects.find(t.args[i]);
      if (obj == impl.objects.end())
        fail("undeclared object '" + t.args[i] + "'", line, 1);
      const auto k = kind_of(obj->second);
      const auto &ok = sig.args[i];
      if (std::find(ok.begin(), ok.end(), k) == ok.end()) {
        std::string want;
        for (auto w : ok)
          want += std::string(want.empty() ? "" : " or ") + object_kind_name(w);
        fail("argument '" + t.args[i] + "' of " + t.op + " must be a " + want + ", not a " +
                 object_kind_name(k),
             line, 1);
      }
    }
    for (const auto &e : s.entries)
      if (e.key != "op" && e.key != "args")
        t.options[e.key] = e.setting;
    impl.tasks.push_back(std::move(t));
  }
};

} // namespace

const char *object_kind_name(ObjectKind k) noexcept {
  switch (k) {
  case ObjectKind::Metric: return "metric";
  case ObjectKind::Tetrad: return "tetrad";
  case ObjectKind::Connection: return "connection";
  case ObjectKind::Vector: return "vector";
  case ObjectKind::OneForm: return "oneform";
  case ObjectKind::Spinor: return "spinor";
  case ObjectKind::Lagrangian: return "lagrangian";
  }
  return "?";
}

std::optional<std::string> TaskSpec::option(const std::string &key) const {
  const auto it = options.find(key);
  if (it == options.end())
    return std::nullopt;
  return it->second.value;
}

int TaskSpec::int_option(const std::string &key, int fallback) const {
  const auto it = options.find(key);
  if (it == options.end())
    return fallback;
  try {
    return std::stoi(it->second.value);
  } catch (const std::exception &) {
    fail("option " + key + " must be an integer", it->second.line, it->second.column);
  }
}

bool TaskSpec::flag(const std::string &key) const {
  const auto v = option(key);
  return v && (*v == "true" || *v == "yes" || *v == "1");
}

Scenario Scenario::parse(std::string_view text) {
  Builder b;
  std::optional<Section> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string raw(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    const std::size_t indent = raw.find_first_not_of(" \t") + 1;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail("unterminated section header", line_no, indent + line.size() - 1);
      if (current)
        b.finish(*current);
      const auto w = words(line.substr(1, line.size() - 2));
      if (w.empty() || w.size() > 2)
        fail("section header must be [kind] or [kind name]", line_no, indent);
      current = Section{w[0], w.size() > 1 ? w[1] : "", line_no, {}};
      continue;
    }
    if (!current)
      fail("entry outside of a section", line_no, indent);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("expected key = value", line_no, indent);
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.key_column = indent;
    const std::string rest = line.substr(eq + 1);
    const auto lead = rest.find_first_not_of(" \t");
    e.setting.value = trim(rest);
    e.setting.line = line_no;
    e.setting.column = indent + eq + 1 + (lead == std::string::npos ? 0 : lead);
    if (e.key.empty())
      fail("empty key", line_no, indent);
    if (e.setting.value.empty())
      fail("empty value for '" + e.key + "'", line_no, e.setting.column);
    for (const auto &prev : current->entries)
      if (prev.key == e.key)
        fail("duplicate key '" + e.key + "'", line_no, indent);
    current->entries.push_back(std::move(e));
  }
  if (current)
    b.finish(*current);
  return Scenario(std::make_shared<const Impl>(std::move(b.impl)));
}

Scenario Scenario::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::size_t Scenario::task_count() const { return impl_->tasks.size(); }

} // namespace maf
