#include <algorithm>

#include "dtheory/surgery.hpp"
#include "dtheory/theories.hpp"

namespace dtheory {

std::string_view to_string(TraceStatus status) {
  switch (status) {
    case TraceStatus::Converged: return "converged";
    case TraceStatus::CycleDetected: return "cycle-detected";
    case TraceStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

ActionPrior normalized_prior(const DilemmaModel& model, const ActionPrior& prior) {
  ActionPrior out;
  for (const auto& a : model.actions()) out[a] = Rational(0);
  Rational sum;
  for (const auto& [a, p] : prior) {
    if (!out.count(a)) throw Error(ErrorCode::InvalidPrior, "'" + a + "' is not an action");
    if (p < Rational(0)) throw Error(ErrorCode::InvalidPrior, "negative probability for '" + a + "'");
    out[a] = p;
    sum += p;
  }
  if (sum != Rational(1)) throw Error(ErrorCode::InvalidPrior, "action prior sums to " + sum.str() + ", not 1");
  return out;
}

struct DispositionNode {
  std::size_t index;
  std::vector<std::string> action_of;  // per domain value of the node
};

// Act marginal under do(node = value), if it is a point mass.
std::optional<std::string> forced_action(const DilemmaModel& model, const std::string& node, const std::string& value) {
  const auto worlds = condition(do_intervene(model, {node, value}));
  std::optional<std::string> forced;
  for (const auto& [a, p] : marginal(worlds, model.designations().act)) {
    if (p == Rational(1)) forced = a;
  }
  return forced;
}

DispositionNode find_disposition(const DilemmaModel& model) {
  const auto act = model.act_index();
  const auto n_actions = model.actions().size();
  std::vector<DispositionNode> found;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& v = model.var(i);
    if (v.kind != VarKind::Stochastic || !v.parents.empty() || v.domain.size() != n_actions) continue;
    if (i != act && !model.is_ancestor(i, act)) continue;
    DispositionNode d{i, {}};
    for (const auto& value : v.domain) {
      auto a = forced_action(model, v.name, value);
      if (!a) break;
      d.action_of.push_back(*a);
    }
    if (d.action_of.size() != n_actions) continue;
    auto sorted = d.action_of;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    if (i == act) return d;
    found.push_back(std::move(d));
  }
  if (found.size() != 1) {
    throw Error(ErrorCode::NoActPriorNode,
                found.empty() ? "no root node determines the act" : "several root nodes determine the act");
  }
  return found.front();
}

}  // namespace

DilemmaModel with_act_prior(const DilemmaModel& model, const ActionPrior& prior) {
  const auto full = normalized_prior(model, prior);
  const auto d = find_disposition(model);
  const auto& v = model.var(d.index);
  StochasticNode root{v.name, {}, {}};
  auto& dist = root.cpt[Row{}];
  for (std::size_t k = 0; k < v.domain.size(); ++k) dist[v.domain[k]] = full.at(d.action_of[k]);
  return replace_node(model, std::move(root));
}

ActionPrior act_marginal(const DilemmaModel& model) {
  ActionPrior out;
  for (const auto& [a, p] : marginal(condition(model), model.designations().act)) out[a] = p;
  return out;
}

ActionPrior point_mass(const DilemmaModel& model, const std::string& action) {
  ActionPrior out;
  for (const auto& a : model.actions()) out[a] = Rational(a == action ? 1 : 0);
  if (!out.count(action)) throw Error(ErrorCode::InvalidPrior, "'" + action + "' is not an action");
  return out;
}

BestResponseTrace cdt_best_response(const DilemmaModel& model, const ActionPrior& initial, std::size_t budget) {
  BestResponseTrace trace;
  trace.initial = normalized_prior(model, initial);
  std::vector<ActionPrior> seen{trace.initial};
  auto current = trace.initial;
  for (std::size_t step = 0; step < budget; ++step) {
    auto prescription = cdt(with_act_prior(model, current));
    const auto action = prescription.chosen.front();
    auto next = point_mass(model, action);
    trace.steps.push_back({current, std::move(prescription), action});
    if (next == current) {
      trace.status = TraceStatus::Converged;
      return trace;
    }
    if (auto it = std::find(seen.begin(), seen.end(), next); it != seen.end()) {
      trace.status = TraceStatus::CycleDetected;
      trace.period = static_cast<std::size_t>(seen.end() - it);
      return trace;
    }
    seen.push_back(next);
    current = std::move(next);
  }
  trace.status = TraceStatus::BudgetExhausted;
  return trace;
}

ActionPrior cdt_ratify(const DilemmaModel& model, const std::optional<std::pair<std::string, std::string>>& support) {
  const auto& actions = model.actions();
  std::pair<std::string, std::string> pair;
  if (support) {
    pair = *support;
  } else if (actions.size() == 2) {
    pair = {actions[0], actions[1]};
  } else {
    throw Error(ErrorCode::NoRatifiableState, "ratification needs a two-action support");
  }
  const auto& [a, b] = pair;
  point_mass(model, a);
  point_mass(model, b);
  if (a == b) throw Error(ErrorCode::NoRatifiableState, "support actions must differ");

  auto eus_at = [&](const Rational& pa) {
    ActionPrior prior{{a, pa}, {b, Rational(1) - pa}};
    return cdt(with_act_prior(model, prior));
  };
  auto gap = [&](const Prescription& p) { return *p.eu(a) - *p.eu(b); };

  for (const auto& candidate : actions) {
    if (candidate != a && candidate != b) continue;
    const auto p = cdt(with_act_prior(model, point_mass(model, candidate)));
    if (std::find(p.chosen.begin(), p.chosen.end(), candidate) != p.chosen.end()) {
      return point_mass(model, candidate);
    }
  }

  const auto f0 = gap(eus_at(Rational(0)));
  const auto f1 = gap(eus_at(Rational(1)));
  const auto fh = gap(eus_at(Rational(1, 2)));
  if (fh * Rational(2) != f0 + f1) {
    throw Error(ErrorCode::NoRatifiableState, "expected utility is not affine in the action prior");
  }
  if (f0 == f1) throw Error(ErrorCode::NoRatifiableState, "no indifference point between '" + a + "' and '" + b + "'");
  const auto pi = f0 / (f0 - f1);
  if (pi < Rational(0) || pi > Rational(1)) {
    throw Error(ErrorCode::NoRatifiableState, "indifference point " + pi.str() + " lies outside [0, 1]");
  }
  const auto at = eus_at(pi);
  for (const auto& av : at.per_action) {
    if (av.action != a && av.action != b && av.eu > *at.eu(a)) {
      throw Error(ErrorCode::NoRatifiableState,
                  "'" + av.action + "' does strictly better at the indifference point");
    }
  }
  ActionPrior out = point_mass(model, a);
  out[a] = pi;
  out[b] = Rational(1) - pi;
  return out;
}

}  // namespace dtheory
