#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dtheory {

enum class ErrorCode {
  InvalidModel,
  NonBijectiveMapping,
  UnknownName,
  PartialWorld,
  ValueOutOfDomain,
  UnknownVariable,
  ZeroProbabilityEvidence,
  NonNumericVariable,
  NotNormalized,
  ComplexityLimitExceeded,
  UnknownTarget,
  AllActionsExcluded,
  MissingFdtNode,
  UnknownObservation,
  NoActPriorNode,
  NoRatifiableState,
  IncomparableHypotheticals,
  InvalidPrior,
  UnknownDilemma,
  UnknownParameter,
  ParamOutOfRange,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class ViolationKind {
  DuplicateVariable,
  EmptyDomain,
  DuplicateValue,
  BadName,
  MissingNode,
  UndeclaredNode,
  DuplicateNode,
  KindMismatch,
  DanglingParent,
  DuplicateParent,
  UtilityParent,
  UtilityCount,
  CycleDetected,
  IncompleteCPT,
  UnexpectedRow,
  ValueOutOfDomain,
  BadProbability,
  NonNormalizedRow,
  BadDesignation,
};

std::string_view to_string(ViolationKind kind);

using Row = std::vector<std::string>;

struct Violation {
  ViolationKind kind;
  std::string message;
  std::string variable;       // offending variable, empty for model-level issues
  std::optional<Row> row;     // offending parent tuple, when relevant
  std::string related;        // second name involved, e.g. the bad parent
};

/// Thrown by build_model; carries every violation found, not just the first.
class ModelError : public Error {
 public:
  explicit ModelError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }
  bool has(ViolationKind kind) const;

 private:
  std::vector<Violation> violations_;
};

std::string format_row(const Row& row);

}  // namespace dtheory
