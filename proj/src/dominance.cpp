#include <algorithm>

#include "dtheory/surgery.hpp"
#include "dtheory/theories.hpp"

namespace dtheory {

std::string_view to_string(DominanceResult result) {
  switch (result) {
    case DominanceResult::Dominates: return "dominates";
    case DominanceResult::Dominated: return "dominated";
    case DominanceResult::Neither: return "neither";
  }
  return "?";
}

namespace {

using Cell = std::vector<std::uint32_t>;

// E[V | exogenous cell] for one hypothetical.
std::map<Cell, Rational> cell_values(const WeightedWorlds& worlds, const std::vector<std::size_t>& exogenous) {
  std::map<Cell, Rational> mass;
  std::map<Cell, Rational> total;
  for (const auto& w : worlds.worlds()) {
    Cell c;
    c.reserve(exogenous.size());
    for (auto i : exogenous) c.push_back(w.world.values[i]);
    mass[c] += w.weight;
    total[c] += w.weight * w.world.utility;
  }
  std::map<Cell, Rational> out;
  for (const auto& [c, m] : mass) out[c] = total[c] / m;
  return out;
}

}  // namespace

DominanceResult dominance(const DilemmaModel& model, Theory theory, const std::string& a, const std::string& b,
                          const std::optional<std::string>& obs) {
  const auto target_name = theory == Theory::Fdt ? fdt_target(model, obs) : model.designations().act;
  const auto target = model.index(target_name);
  if (a == b) {
    hypothetical(model, theory, a, obs);
    return DominanceResult::Neither;
  }

  // Exogenous: non-descendants of the target other than the utility node,
  // minus noise roots whose every child is downstream of the target.
  std::vector<std::size_t> exogenous;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& v = model.var(i);
    if (i == target || v.kind == VarKind::Utility || model.is_ancestor(target, i)) continue;
    const bool absorbed = v.parents.empty() && !v.children.empty() &&
                          std::all_of(v.children.begin(), v.children.end(), [&](std::size_t c) {
                            return c == target || model.is_ancestor(target, c);
                          });
    if (!absorbed) exogenous.push_back(i);
  }

  const auto va = cell_values(hypothetical(model, theory, a, obs), exogenous);
  const auto vb = cell_values(hypothetical(model, theory, b, obs), exogenous);
  if (va.size() != vb.size() ||
      !std::equal(va.begin(), va.end(), vb.begin(), [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw Error(ErrorCode::IncomparableHypotheticals,
                "hypotheticals for '" + a + "' and '" + b + "' have different exogenous supports");
  }

  bool a_better = false;
  bool b_better = false;
  for (const auto& [cell, ua] : va) {
    const auto& ub = vb.at(cell);
    if (ua > ub) a_better = true;
    if (ub > ua) b_better = true;
  }
  if (a_better && !b_better) return DominanceResult::Dominates;
  if (b_better && !a_better) return DominanceResult::Dominated;
  return DominanceResult::Neither;
}

bool agreement_condition(const DilemmaModel& model) {
  if (model.obs_index()) return false;
  std::string f;
  try {
    f = fdt_target(model, std::nullopt);
  } catch (const Error&) {
    return false;
  }
  const auto act = model.act_index();
  const auto& av = model.var(act);
  const auto fi = model.index(f);
  if (fi == act) return av.parents.empty();

  const auto& fv = model.var(fi);
  if (av.parents != std::vector<std::size_t>{fi} || !fv.parents.empty()) return false;
  if (fv.children != std::vector<std::size_t>{act}) return false;
  if (av.kind != VarKind::Deterministic) return false;
  for (std::size_t k = 0; k < fv.domain.size(); ++k) {
    if (av.domain[av.table[k]] != fv.domain[k]) return false;
  }
  return true;
}

}  // namespace dtheory
