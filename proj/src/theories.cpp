#include "dtheory/theories.hpp"

#include <algorithm>

#include "dtheory/surgery.hpp"

namespace dtheory {

std::string_view to_string(Theory theory) {
  switch (theory) {
    case Theory::Edt: return "edt";
    case Theory::Cdt: return "cdt";
    case Theory::Fdt: return "fdt";
  }
  return "?";
}

std::optional<Theory> parse_theory(std::string_view text) {
  if (text == "edt") return Theory::Edt;
  if (text == "cdt") return Theory::Cdt;
  if (text == "fdt") return Theory::Fdt;
  return std::nullopt;
}

std::optional<Rational> Prescription::eu(std::string_view action) const {
  for (const auto& av : per_action) {
    if (av.action == action) return av.eu;
  }
  return std::nullopt;
}

namespace {

void check_action(const DilemmaModel& model, const std::string& action) {
  const auto& acts = model.actions();
  if (std::find(acts.begin(), acts.end(), action) == acts.end()) {
    throw Error(ErrorCode::ValueOutOfDomain, "'" + action + "' is not an action of '" + model.designations().act + "'");
  }
}

void check_observation(const DilemmaModel& model, const std::optional<std::string>& obs) {
  if (!obs) return;
  const auto i = model.obs_index();
  if (!i) throw Error(ErrorCode::UnknownObservation, "model has no observation node, got '" + *obs + "'");
  if (!model.var(*i).value_index(*obs)) {
    throw Error(ErrorCode::UnknownObservation,
                "'" + *obs + "' is not a value of observation node '" + model.var(*i).name + "'");
  }
}

Assignment obs_evidence(const DilemmaModel& model, const std::optional<std::string>& obs) {
  Assignment e;
  if (obs) e.values[*model.designations().obs] = *obs;
  return e;
}

void choose(Prescription& p) {
  if (p.per_action.empty()) return;
  const auto best = std::max_element(p.per_action.begin(), p.per_action.end(),
                                     [](const auto& x, const auto& y) { return x.eu < y.eu; })
                        ->eu;
  for (const auto& av : p.per_action) {
    if (av.eu == best) p.chosen.push_back(av.action);
  }
}

}  // namespace

std::string fdt_target(const DilemmaModel& model, const std::optional<std::string>& obs) {
  const auto& d = model.designations();
  if (obs) {
    check_observation(model, obs);
    if (auto it = d.fdt.find(*obs); it != d.fdt.end()) return it->second;
    throw Error(ErrorCode::MissingFdtNode, "no fdt node for observation '" + *obs + "'");
  }
  if (d.self) return *d.self;
  if (auto it = d.fdt.find(std::string(kNoObservation)); it != d.fdt.end()) return it->second;
  throw Error(ErrorCode::MissingFdtNode, "no fdt node for the no-observation case");
}

WeightedWorlds hypothetical(const DilemmaModel& model, Theory theory, const std::string& action,
                            const std::optional<std::string>& obs) {
  check_action(model, action);
  check_observation(model, obs);
  switch (theory) {
    case Theory::Edt: {
      auto e = obs_evidence(model, obs);
      e.values[model.designations().act] = action;
      return condition(model, e);
    }
    case Theory::Cdt:
      return condition(do_intervene(model, {model.designations().act, action}), obs_evidence(model, obs));
    case Theory::Fdt:
      return condition(do_intervene(model, {fdt_target(model, obs), action}));
  }
  throw std::logic_error("unreachable");
}

Prescription evaluate(const DilemmaModel& model, Theory theory, const std::optional<std::string>& obs) {
  check_observation(model, obs);
  Prescription p;
  p.theory = theory;
  const auto& value = model.designations().value;

  if (theory == Theory::Edt) {
    const auto e = obs_evidence(model, obs);
    const auto prior = enumerate_worlds(model, e);
    if (prior.total().is_zero()) {
      throw Error(ErrorCode::ZeroProbabilityEvidence, "observation '" + obs.value_or("") + "' has probability 0");
    }
    for (const auto& a : model.actions()) {
      Assignment ea = e;
      ea.values[model.designations().act] = a;
      if (probability(prior, ea).is_zero()) {
        p.excluded.push_back({a, obs ? "P(" + a + " | " + *obs + ") = 0" : "P(" + a + ") = 0"});
        continue;
      }
      p.per_action.push_back({a, expectation(condition(model, ea), value)});
    }
    if (p.per_action.empty()) {
      throw Error(ErrorCode::AllActionsExcluded, "every action has probability 0 under the model");
    }
  } else {
    if (theory == Theory::Fdt) fdt_target(model, obs);
    for (const auto& a : model.actions()) {
      p.per_action.push_back({a, expectation(hypothetical(model, theory, a, obs), value)});
    }
  }
  choose(p);
  return p;
}

Prescription edt(const DilemmaModel& model, const std::optional<std::string>& obs) {
  return evaluate(model, Theory::Edt, obs);
}
Prescription cdt(const DilemmaModel& model, const std::optional<std::string>& obs) {
  return evaluate(model, Theory::Cdt, obs);
}
Prescription fdt(const DilemmaModel& model, const std::optional<std::string>& obs) {
  return evaluate(model, Theory::Fdt, obs);
}

}  // namespace dtheory
