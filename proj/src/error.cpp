#include "dtheory/error.hpp"

#include <algorithm>

namespace dtheory {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NonBijectiveMapping: return "NonBijectiveMapping";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::PartialWorld: return "PartialWorld";
    case ErrorCode::ValueOutOfDomain: return "ValueOutOfDomain";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorCode::NonNumericVariable: return "NonNumericVariable";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ComplexityLimitExceeded: return "ComplexityLimitExceeded";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::AllActionsExcluded: return "AllActionsExcluded";
    case ErrorCode::MissingFdtNode: return "MissingFdtNode";
    case ErrorCode::UnknownObservation: return "UnknownObservation";
    case ErrorCode::NoActPriorNode: return "NoActPriorNode";
    case ErrorCode::NoRatifiableState: return "NoRatifiableState";
    case ErrorCode::IncomparableHypotheticals: return "IncomparableHypotheticals";
    case ErrorCode::InvalidPrior: return "InvalidPrior";
    case ErrorCode::UnknownDilemma: return "UnknownDilemma";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
  }
  return "Unknown";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateVariable: return "DuplicateVariable";
    case ViolationKind::EmptyDomain: return "EmptyDomain";
    case ViolationKind::DuplicateValue: return "DuplicateValue";
    case ViolationKind::BadName: return "BadName";
    case ViolationKind::MissingNode: return "MissingNode";
    case ViolationKind::UndeclaredNode: return "UndeclaredNode";
    case ViolationKind::DuplicateNode: return "DuplicateNode";
    case ViolationKind::KindMismatch: return "KindMismatch";
    case ViolationKind::DanglingParent: return "DanglingParent";
    case ViolationKind::DuplicateParent: return "DuplicateParent";
    case ViolationKind::UtilityParent: return "UtilityParent";
    case ViolationKind::UtilityCount: return "UtilityCount";
    case ViolationKind::CycleDetected: return "CycleDetected";
    case ViolationKind::IncompleteCPT: return "IncompleteCPT";
    case ViolationKind::UnexpectedRow: return "UnexpectedRow";
    case ViolationKind::ValueOutOfDomain: return "ValueOutOfDomain";
    case ViolationKind::BadProbability: return "BadProbability";
    case ViolationKind::NonNormalizedRow: return "NonNormalizedRow";
    case ViolationKind::BadDesignation: return "BadDesignation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  if (violations.empty()) return "invalid model";
  std::string out = std::string(to_string(violations.front().kind)) + ": " + violations.front().message;
  if (violations.size() > 1) out += " (+" + std::to_string(violations.size() - 1) + " more)";
  return out;
}

}  // namespace

ModelError::ModelError(std::vector<Violation> violations)
    : Error(ErrorCode::InvalidModel, summarize(violations)), violations_(std::move(violations)) {}

bool ModelError::has(ViolationKind kind) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string format_row(const Row& row) {
  std::string out = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ", ";
    out += row[i];
  }
  return out + ")";
}

}  // namespace dtheory
