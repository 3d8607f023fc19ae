#pragma once

#include "metaffine/error.hpp"
#include "metaffine/lifts.hpp"
#include "metaffine/scenario.hpp"
#include "metaffine/spinor.hpp"
#include "metaffine/variational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <variant>

namespace maf {

struct OneForm {
  TensorField form; // layout "d"
};

using Object = std::variant<MetricField, TetradField, WorldConnection, BaseVectorField, OneForm,
                            SpinorFieldExpr, LagrangianDensity>;

enum class ObjectKind : std::uint8_t { Metric, Tetrad, Connection, Vector, OneForm, Spinor, Lagrangian };

const char *object_kind_name(ObjectKind k) noexcept;
inline ObjectKind kind_of(const Object &o) { return static_cast<ObjectKind>(o.index()); }

struct Setting {
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct TaskSpec {
  std::string id;
  std::string op;
  std::vector<std::string> args;
  std::map<std::string, Setting> options;
  std::size_t line = 0;

  std::optional<std::string> option(const std::string &key) const;
  int int_option(const std::string &key, int fallback) const;
  bool flag(const std::string &key) const;
};

struct Scenario::Impl {
  std::optional<Chart> chart;
  std::map<std::string, Object> objects;
  std::vector<TaskSpec> tasks;
};

struct TaskContext {
  const Scenario::Impl &scenario;
  const TaskSpec &spec;
  std::vector<const Object *> args;
  ZeroTestOptions opts;
};

using TaskHandler = std::function<void(const TaskContext &, TaskRecord &)>;

struct OpSignature {
  /// One entry per positional argument; each lists the accepted kinds.
  std::vector<std::vector<ObjectKind>> args;
  /// Trailing arguments that may be omitted.
  std::size_t optional = 0;
  TaskHandler run;
};

const std::map<std::string, OpSignature> &operation_table();

TaskRecord execute(const Scenario::Impl &impl, const TaskSpec &spec, const ZeroTestOptions &opts);

/// Compact printed form: expanded when that stays small.
std::string display(const Expr &e);

} // namespace maf
