#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loa {

enum class ErrorKind {
  MalformedDocument,
  DuplicateSymbol,
  DuplicateActionName,
  InvalidSchema,
  UnresolvedSymbol,
  InvalidCostModel,
  InputTooLarge,
  InvalidConfig,
  InvalidEvent,
  UnknownScenario,
  SessionEnded,
  EquivalencyNotEstablished,
  ScoreOutOfRange,
  ScenarioMismatch,
  ForeignReference,
  PreconditionFailed,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::DuplicateActionName: return "DuplicateActionName";
    case ErrorKind::InvalidSchema: return "InvalidSchema";
    case ErrorKind::UnresolvedSymbol: return "UnresolvedSymbol";
    case ErrorKind::InvalidCostModel: return "InvalidCostModel";
    case ErrorKind::InputTooLarge: return "InputTooLarge";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidEvent: return "InvalidEvent";
    case ErrorKind::UnknownScenario: return "UnknownScenario";
    case ErrorKind::SessionEnded: return "SessionEnded";
    case ErrorKind::EquivalencyNotEstablished: return "EquivalencyNotEstablished";
    case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorKind::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorKind::ForeignReference: return "ForeignReference";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Violation {
  ErrorKind kind;
  std::string message;
};

/// Thrown by catalog loading. Carries every violation found, not only the first;
/// kind() reports the first one.
class CatalogError : public Error {
 public:
  explicit CatalogError(std::vector<Violation> violations)
      : Error(violations.empty() ? ErrorKind::InvalidSchema : violations.front().kind,
              summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& violations) {
    if (violations.empty()) return "invalid catalog";
    std::string out = violations.front().message;
    if (violations.size() > 1)
      out += " (+" + std::to_string(violations.size() - 1) + " more)";
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace loa
