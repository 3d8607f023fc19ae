#include "internal.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace maf {

using ojson = nlohmann::ordered_json;

const char *status_name(TaskStatus s) noexcept {
  switch (s) {
  case TaskStatus::Ok: return "ok";
  case TaskStatus::Pass: return "pass";
  case TaskStatus::Fail: return "fail";
  case TaskStatus::Error: return "error";
  }
  return "?";
}

int Report::exit_code() const {
  int code = 0;
  for (const auto &t : tasks) {
    if (t.status == TaskStatus::Error)
      return 2;
    if (t.status == TaskStatus::Fail)
      code = 1;
  }
  return code;
}

namespace {

std::string approx(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ojson number(const Rational &r) { return ojson{{"exact", to_string(r)}, {"approx", r.get_d()}}; }

std::string verdict_text(const ZeroVerdict &v) {
  std::string s = zero_kind_name(v.kind);
  if (v.kind == ZeroKind::ProbablyZero)
    s += " (" + std::to_string(v.samples) + " samples)";
  if (v.kind == ZeroKind::Nonzero) {
    s = "NONZERO";
    if (!v.label.empty())
      s += " [" + v.label + "]";
    if (!v.witness.empty()) {
      s += " at";
      bool first = true;
      for (const auto &[k, x] : v.witness) {
        s += (first ? " " : ", ") + k + "=" + to_string(x);
        first = false;
      }
    }
    if (v.exact_value)
      s += " value " + to_string(*v.exact_value);
    else if (!v.witness.empty())
      s += " value ~ " + approx(v.value);
  }
  return s;
}

struct Tally {
  int ok = 0, pass = 0, fail = 0, error = 0;
};

Tally tally(const std::vector<TaskRecord> &tasks) {
  Tally t;
  for (const auto &r : tasks)
    switch (r.status) {
    case TaskStatus::Ok: ++t.ok; break;
    case TaskStatus::Pass: ++t.pass; break;
    case TaskStatus::Fail: ++t.fail; break;
    case TaskStatus::Error: ++t.error; break;
    }
  return t;
}

} // namespace

std::string Report::text(bool timing) const {
  std::ostringstream os;
  if (!title.empty())
    os << "== " << title << " ==\n";
  for (const auto &t : tasks) {
    std::string status = status_name(t.status);
    for (auto &c : status)
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    os << "[" << t.id << "] " << t.op << ": " << status << "\n";
    for (const auto &c : t.components)
      os << "  " << c.index << " = " << display(c.value) << "\n";
    for (const auto &[k, v] : t.notes)
      os << "  " << k << ": " << v << "\n";
    for (const auto &c : t.checks)
      os << "  check " << c.name << ": " << verdict_text(c.verdict) << "\n";
    if (!t.error.empty())
      os << "  error: " << t.error << "\n";
    if (timing)
      os << "  time: " << approx(t.seconds) << " s\n";
  }
  const Tally s = tally(tasks);
  os << "summary: " << tasks.size() << " tasks, " << s.pass << " pass, " << s.ok << " ok, " << s.fail
     << " fail, " << s.error << " error\n";
  return os.str();
}

std::string Report::json(bool timing) const {
  ojson root;
  root["title"] = title;
  ojson list = ojson::array();
  for (const auto &t : tasks) {
    ojson r;
    r["id"] = t.id;
    r["op"] = t.op;
    r["status"] = status_name(t.status);
    ojson comps = ojson::array();
    for (const auto &c : t.components) {
      ojson e{{"index", c.index}, {"expr", display(c.value)}};
      if (c.value.is_constant())
        e["value"] = number(c.value.value());
      comps.push_back(std::move(e));
    }
    r["components"] = std::move(comps);
    ojson notes = ojson::object();
    for (const auto &[k, v] : t.notes)
      notes[k] = v;
    r["notes"] = std::move(notes);
    ojson checks = ojson::array();
    for (const auto &c : t.checks) {
      ojson e{{"name", c.name}, {"verdict", zero_kind_name(c.verdict.kind)}};
      if (c.verdict.kind == ZeroKind::ProbablyZero)
        e["samples"] = c.verdict.samples;
      if (c.verdict.kind == ZeroKind::Nonzero) {
        if (!c.verdict.label.empty())
          e["label"] = c.verdict.label;
        if (!c.verdict.witness.empty()) {
          ojson w = ojson::object();
          for (const auto &[k, x] : c.verdict.witness)
            w[k] = number(x);
          e["witness"] = std::move(w);
          if (c.verdict.exact_value)
            e["value"] = number(*c.verdict.exact_value);
          else
            e["value"] = ojson{{"approx", c.verdict.value}};
        }
      }
      checks.push_back(std::move(e));
    }
    r["checks"] = std::move(checks);
    if (!t.error.empty())
      r["error"] = t.error;
    if (timing)
      r["seconds"] = t.seconds;
    list.push_back(std::move(r));
  }
  root["tasks"] = std::move(list);
  const Tally s = tally(tasks);
  root["summary"] = ojson{{"tasks", tasks.size()}, {"pass", s.pass}, {"ok", s.ok}, {"fail", s.fail},
                          {"error", s.error}, {"exit_code", exit_code()}};
  return root.dump(2) + "\n";
}

} // namespace maf
