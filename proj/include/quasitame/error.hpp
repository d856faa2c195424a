#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quasitame {

enum class ErrorKind {
  InvalidOrder,
  NotAPGroup,
  FinalRankFinite,
  NotReduced,
  WrongCase,
  DimensionMismatch,
  IllFormedHom,
  FactorizationOverflow,
  SizeError,
  IndexOrder,
  InvalidSystem,
  NotFinitelyGenerated,
  NonPeriodicTail,
  NotFinite,
  TooLarge,
  SyntaxError,
  SemanticError,
  InconclusiveHorizon,
  Schema,
  Internal,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
public:
  SyntaxError(int line, int column, std::vector<std::string> expected,
              const std::string &found);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string> &expected() const noexcept {
    return expected_;
  }

private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

class SemanticError : public Error {
public:
  explicit SemanticError(std::vector<std::string> violations);

  const std::vector<std::string> &violations() const noexcept {
    return violations_;
  }

private:
  std::vector<std::string> violations_;
};

} // namespace quasitame
