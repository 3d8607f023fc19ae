#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maf {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or scenario text. `offset` is a byte offset into the
/// parsed string; `line`/`column` are filled in by the scenario reader.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t offset, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), offset_(offset), line_(line), column_(column) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

class UnknownIdentifierError : public Error {
public:
  UnknownIdentifierError(const std::string &name, std::size_t offset)
      : Error("unknown identifier '" + name + "'"), name_(name), offset_(offset) {}

  const std::string &name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::string name_;
  std::size_t offset_;
};

/// Arithmetic outside the domain: division by zero, sqrt/ln of a negative
/// constant, or no admissible sample point found.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Metric, tetrad or matrix not invertible at a sample point.
class SingularError : public Error {
public:
  using Error::Error;
};

/// A declared index symmetry does not hold.
class SymmetryError : public Error {
public:
  using Error::Error;
};

/// A total derivative would leave the jet order available in the context.
class JetOrderError : public Error {
public:
  using Error::Error;
};

/// Operands live on different charts, bundles or index layouts.
class MismatchError : public Error {
public:
  using Error::Error;
};

class ExpansionBudgetError : public Error {
public:
  using Error::Error;
};

} // namespace maf
