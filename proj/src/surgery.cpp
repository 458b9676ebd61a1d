#include "dtheory/surgery.hpp"

namespace dtheory {

namespace {

std::size_t target_index(const DilemmaModel& model, const std::string& target) {
  auto i = model.find(target);
  if (!i) throw Error(ErrorCode::UnknownTarget, "cannot intervene on unknown variable '" + target + "'");
  return *i;
}

}  // namespace

DilemmaModel do_intervene(const DilemmaModel& model, const Intervention& iv) {
  const auto& v = model.var(target_index(model, iv.target));
  if (v.kind == VarKind::Utility) {
    throw Error(ErrorCode::ValueOutOfDomain, "the utility variable '" + iv.target + "' cannot be intervened on");
  }
  if (!v.value_index(iv.value)) {
    throw Error(ErrorCode::ValueOutOfDomain, "'" + iv.value + "' is not in the domain of '" + iv.target + "'");
  }
  DeterministicNode constant{iv.target, {}, {{Row{}, iv.value}}};
  return replace_node(model, std::move(constant));
}

std::set<std::string> descendant_set(const DilemmaModel& model, const std::string& target) {
  const auto t = target_index(model, target);
  std::set<std::string> out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model.is_ancestor(t, i)) out.insert(model.var(i).name);
  }
  return out;
}

std::set<std::string> non_descendant_set(const DilemmaModel& model, const std::string& target) {
  const auto t = target_index(model, target);
  std::set<std::string> out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (i != t && !model.is_ancestor(t, i)) out.insert(model.var(i).name);
  }
  return out;
}

}  // namespace dtheory
