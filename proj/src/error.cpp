#include "quasitame/error.hpp"

#include <sstream>

namespace quasitame {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidOrder: return "InvalidOrder";
  case ErrorKind::NotAPGroup: return "NotAPGroup";
  case ErrorKind::FinalRankFinite: return "FinalRankFinite";
  case ErrorKind::NotReduced: return "NotReduced";
  case ErrorKind::WrongCase: return "WrongCase";
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::IllFormedHom: return "IllFormedHom";
  case ErrorKind::FactorizationOverflow: return "FactorizationOverflow";
  case ErrorKind::SizeError: return "SizeError";
  case ErrorKind::IndexOrder: return "IndexOrder";
  case ErrorKind::InvalidSystem: return "InvalidSystem";
  case ErrorKind::NotFinitelyGenerated: return "NotFinitelyGenerated";
  case ErrorKind::NonPeriodicTail: return "NonPeriodicTail";
  case ErrorKind::NotFinite: return "NotFinite";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::SyntaxError: return "SyntaxError";
  case ErrorKind::SemanticError: return "SemanticError";
  case ErrorKind::InconclusiveHorizon: return "InconclusiveHorizon";
  case ErrorKind::Schema: return "Schema";
  case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

std::string syntax_message(int line, int column,
                           const std::vector<std::string> &expected,
                           const std::string &found) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << ", found " << found;
  return os.str();
}

std::string semantic_message(const std::vector<std::string> &violations) {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

} // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected,
                         const std::string &found)
    : Error(ErrorKind::SyntaxError,
            syntax_message(line, column, expected, found)),
      line_(line), column_(column), expected_(std::move(expected)) {}

SemanticError::SemanticError(std::vector<std::string> violations)
    : Error(ErrorKind::SemanticError, semantic_message(violations)),
      violations_(std::move(violations)) {}

} // namespace quasitame
