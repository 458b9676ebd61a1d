#pragma once

#include <map>
#include <optional>
#include <string>

#include "dtheory/model.hpp"

namespace dtheory {

/// Substitutions for variable names and for value labels. Value renaming is
/// global: a label is replaced wherever it occurs, in every domain.
struct RenameMap {
  std::map<std::string, std::string> variables;
  std::map<std::string, std::string> values;
  std::optional<std::string> model_name;
};

/// Throws UnknownName if a source name does not occur in the model, and
/// NonBijectiveMapping if the substitution would merge two names.
DilemmaModel rename(const DilemmaModel& model, const RenameMap& map);

/// The inverse substitution, for mapping results back.
RenameMap invert(const RenameMap& map);

}  // namespace dtheory
