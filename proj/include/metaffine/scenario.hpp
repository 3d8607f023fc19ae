#pragma once

// Scenario files and reports for the command-line front end.
//
//   # comment
//   [chart]
//   coords = t r th ph
//   params = M
//
//   [metric g]
//   signature = lorentzian
//   diag = 1 - 2*M/r; -1/(1 - 2*M/r); -r^2; -r^2*sin(th)^2
//
//   [task R]
//   op = scalar_curvature
//   args = g
//   expect = 0
//
// Object sections: metric, tetrad, connection, vector, oneform, spinor,
// lagrangian. Components are given as "(i,j) = expr", "diag = a; b" or
// "components = a; b; …" (row-major). See README.md for the task catalogue.

#include "metaffine/symexpr.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maf {

struct RunOptions {
  std::uint64_t seed = 0x5eed2024ULL;
  int samples = 32;
  bool serial = false;
};

enum class TaskStatus : std::uint8_t { Ok, Pass, Fail, Error };

const char *status_name(TaskStatus s) noexcept;

struct CheckRecord {
  std::string name;
  ZeroVerdict verdict;
};

struct ComponentRecord {
  std::string index;
  Expr value;
};

struct TaskRecord {
  std::string id;
  std::string op;
  TaskStatus status = TaskStatus::Ok;
  std::vector<ComponentRecord> components;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, std::string>> notes;
  std::string error;
  double seconds = 0.0;
};

struct Report {
  std::string title;
  std::vector<TaskRecord> tasks;

  /// 0 when every task succeeded, 1 when a check failed, 2 when a task errored.
  int exit_code() const;
  std::string text(bool timing = false) const;
  std::string json(bool timing = false) const;
};

class Scenario {
public:
  /// Throws ParseError (with line and column) on malformed text, unknown
  /// operations, undeclared or mistyped arguments.
  static Scenario parse(std::string_view text);
  static Scenario load(const std::string &path);

  std::size_t task_count() const;
  Report run(const RunOptions &opts = {}) const;

  struct Impl;

private:
  explicit Scenario(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct SelfcheckOptions {
  RunOptions run;
  /// Test hook: perturbs one gamma matrix before the Clifford check.
  bool tamper_gamma = false;
};

Report selfcheck(const SelfcheckOptions &opts = {});

} // namespace maf
