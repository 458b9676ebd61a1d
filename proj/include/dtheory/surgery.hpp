#pragma once

#include <set>
#include <string>

#include "dtheory/model.hpp"

namespace dtheory {

struct Intervention {
  std::string target;
  std::string value;
};

/// do(target = value): the target loses its parents and becomes a
/// deterministic constant. Everything else is untouched.
DilemmaModel do_intervene(const DilemmaModel& model, const Intervention& iv);

/// Variables with no directed path from `target`, excluding the target.
std::set<std::string> non_descendant_set(const DilemmaModel& model, const std::string& target);

/// Variables reachable from `target` along child edges, excluding the target.
std::set<std::string> descendant_set(const DilemmaModel& model, const std::string& target);

}  // namespace dtheory
