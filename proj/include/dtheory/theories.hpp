#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtheory/infer.hpp"
#include "dtheory/model.hpp"

namespace dtheory {

/// How the hypothetical for an action is constructed.
enum class Theory { Edt, Cdt, Fdt };

std::string_view to_string(Theory theory);
std::optional<Theory> parse_theory(std::string_view text);

struct ActionValue {
  std::string action;
  Rational eu;
};

struct Exclusion {
  std::string action;
  std::string reason;
};

struct Prescription {
  Theory theory = Theory::Edt;
  std::vector<ActionValue> per_action;  // domain order, excluded actions absent
  std::vector<std::string> chosen;      // argmax in domain order
  std::vector<Exclusion> excluded;

  std::optional<Rational> eu(std::string_view action) const;
};

/// The node FDT intervenes on for this observation.
std::string fdt_target(const DilemmaModel& model, const std::optional<std::string>& obs);

/// The hypothetical C_a as normalized worlds.
WeightedWorlds hypothetical(const DilemmaModel& model, Theory theory, const std::string& action,
                            const std::optional<std::string>& obs = std::nullopt);

Prescription evaluate(const DilemmaModel& model, Theory theory, const std::optional<std::string>& obs = std::nullopt);

Prescription edt(const DilemmaModel& model, const std::optional<std::string>& obs = std::nullopt);
Prescription cdt(const DilemmaModel& model, const std::optional<std::string>& obs = std::nullopt);
Prescription fdt(const DilemmaModel& model, const std::optional<std::string>& obs = std::nullopt);

// ---- CDT dynamics ----

using ActionPrior = std::map<std::string, Rational>;

/// Replaces the prior of the root that fixes the agent's act (the act node
/// itself, or a disposition root that Act copies) so that P(Act) = prior.
DilemmaModel with_act_prior(const DilemmaModel& model, const ActionPrior& prior);

/// Current marginal over actions.
ActionPrior act_marginal(const DilemmaModel& model);

ActionPrior point_mass(const DilemmaModel& model, const std::string& action);

enum class TraceStatus { Converged, CycleDetected, BudgetExhausted };

std::string_view to_string(TraceStatus status);

struct TraceStep {
  ActionPrior prior;
  Prescription prescription;
  std::string action;
};

struct BestResponseTrace {
  ActionPrior initial;
  std::vector<TraceStep> steps;
  TraceStatus status = TraceStatus::BudgetExhausted;
  std::size_t period = 0;  // cycle length when status is CycleDetected
};

BestResponseTrace cdt_best_response(const DilemmaModel& model, const ActionPrior& initial, std::size_t budget);

/// Ratified CDT prior for two-action supports. Pure fixed points are
/// preferred; otherwise the indifference point is solved exactly.
ActionPrior cdt_ratify(const DilemmaModel& model,
                       const std::optional<std::pair<std::string, std::string>>& support = std::nullopt);

// ---- dominance ----

enum class DominanceResult { Dominates, Dominated, Neither };

std::string_view to_string(DominanceResult result);

DominanceResult dominance(const DilemmaModel& model, Theory theory, const std::string& a, const std::string& b,
                          const std::optional<std::string>& obs = std::nullopt);

/// True when every correlation between Act and the rest of the graph flows
/// through Act: Act is the fdt node and a root, or Act copies a root fdt
/// node that feeds nothing else.
bool agreement_condition(const DilemmaModel& model);

}  // namespace dtheory
