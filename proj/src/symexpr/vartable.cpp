#include "metaffine/symexpr.hpp"

#include <algorithm>

namespace maf {

const char *role_name(VarRole r) noexcept {
  switch (r) {
  case VarRole::ChartCoordinate: return "chart-coordinate";
  case VarRole::FiberCoordinate: return "fiber-coordinate";
  case VarRole::JetVariable: return "jet-variable";
  case VarRole::Ghost: return "ghost";
  case VarRole::Antifield: return "antifield";
  case VarRole::Parameter: return "parameter";
  }
  return "?";
}

VarTable::VarTable(std::initializer_list<std::string> chart_coordinates) {
  for (const auto &c : chart_coordinates)
    add(c, VarRole::ChartCoordinate);
}

void VarTable::add(const std::string &name, VarRole role, std::optional<JetIndex> jet) {
  if (role == VarRole::Ghost)
    throw MismatchError("ghost variable '" + name + "' is only legal in graded polynomials");
  if (name.empty())
    throw MismatchError("empty variable name");
  if (auto it = index_.find(name); it != index_.end()) {
    if (entries_[it->second].role != role)
      throw MismatchError("variable '" + name + "' redeclared with role " + role_name(role));
    return;
  }
  if (jet)
    std::sort(jet->derivatives.begin(), jet->derivatives.end());
  index_.emplace(name, entries_.size());
  entries_.push_back({name, role, std::move(jet)});
}

void VarTable::merge(const VarTable &other) {
  for (const auto &e : other.entries_)
    add(e.name, e.role, e.jet);
}

bool VarTable::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

const VarTable::Entry *VarTable::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_)
    out.push_back(e.name);
  return out;
}

} // namespace maf
