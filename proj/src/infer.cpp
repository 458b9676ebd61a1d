#include "dtheory/infer.hpp"

#include <limits>

namespace dtheory {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

struct Evidence {
  std::vector<std::uint32_t> values;  // kUnset when free
  std::optional<Rational> utility;
};

Evidence resolve(const DilemmaModel& model, const Assignment& a) {
  Evidence e{std::vector<std::uint32_t>(model.size(), kUnset), a.utility};
  for (const auto& [name, value] : a.values) {
    const auto i = model.find(name);
    if (!i) throw Error(ErrorCode::UnknownVariable, "no variable named '" + name + "'");
    const auto& v = model.var(*i);
    if (v.kind == VarKind::Utility) {
      auto u = Rational::parse(value);
      if (!u) throw Error(ErrorCode::ValueOutOfDomain, "'" + value + "' is not a rational value for '" + name + "'");
      if (e.utility && *e.utility != *u) {
        throw Error(ErrorCode::ValueOutOfDomain, "conflicting utility values for '" + name + "'");
      }
      e.utility = *u;
      continue;
    }
    const auto k = v.value_index(value);
    if (!k) throw Error(ErrorCode::ValueOutOfDomain, "'" + value + "' is not in the domain of '" + name + "'");
    e.values[*i] = *k;
  }
  return e;
}

std::size_t row_of(const CompiledVar& v, const std::vector<std::uint32_t>& values) {
  std::size_t row = 0;
  for (std::size_t k = 0; k < v.parents.size(); ++k) row += values[v.parents[k]] * v.strides[k];
  return row;
}

struct Enumerator {
  const DilemmaModel& model;
  const Evidence& evidence;
  const std::vector<std::size_t>& order;
  std::vector<WeightedWorld> out;
  std::vector<std::uint32_t> values;

  void run(std::size_t depth, const Rational& weight, const Rational& utility) {
    if (depth == order.size()) {
      if (evidence.utility && *evidence.utility != utility) return;
      out.push_back({World{values, utility}, weight});
      return;
    }
    const auto i = order[depth];
    const auto& v = model.var(i);
    const auto row = row_of(v, values);
    const auto fixed = evidence.values[i];
    switch (v.kind) {
      case VarKind::Utility:
        values[i] = 0;
        run(depth + 1, weight, v.utility[row]);
        return;
      case VarKind::Deterministic: {
        const auto k = v.table[row];
        if (fixed != kUnset && fixed != k) return;
        values[i] = k;
        run(depth + 1, weight, utility);
        return;
      }
      case VarKind::Stochastic:
        for (std::uint32_t k = 0; k < v.domain.size(); ++k) {
          if (fixed != kUnset && fixed != k) continue;
          const auto& p = v.cpt[row][k];
          if (p.is_zero()) continue;
          values[i] = k;
          run(depth + 1, weight * p, utility);
        }
        return;
    }
  }
};

bool matches(const DilemmaModel& model, const Evidence& e, const WeightedWorld& w) {
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (e.values[i] != kUnset && e.values[i] != w.world.values[i]) return false;
  }
  return !e.utility || *e.utility == w.world.utility;
}

}  // namespace

Rational WeightedWorlds::total() const {
  Rational sum;
  for (const auto& w : worlds_) sum += w.weight;
  return sum;
}

Assignment WeightedWorlds::assignment(std::size_t i) const {
  const auto& w = worlds_.at(i).world;
  Assignment a;
  for (std::size_t k = 0; k < model_.size(); ++k) {
    const auto& v = model_.var(k);
    if (v.kind == VarKind::Utility) {
      a.values[v.name] = w.utility.str();
    } else {
      a.values[v.name] = v.domain[w.values[k]];
    }
  }
  a.utility = w.utility;
  return a;
}

WeightedWorlds WeightedWorlds::normalize() const {
  const auto z = total();
  if (z.is_zero()) throw Error(ErrorCode::ZeroProbabilityEvidence, "evidence has probability 0");
  std::vector<WeightedWorld> out = worlds_;
  for (auto& w : out) w.weight /= z;
  return WeightedWorlds(model_, std::move(out), true);
}

std::uint64_t joint_space_size(const DilemmaModel& model) {
  std::uint64_t size = 1;
  for (const auto& v : model.vars()) {
    if (v.kind == VarKind::Utility) continue;
    const std::uint64_t d = v.domain.size();
    if (size > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
    size *= d;
  }
  return size;
}

Rational joint_probability(const DilemmaModel& model, const Assignment& world) {
  const auto e = resolve(model, world);
  Rational p(1);
  Rational utility;
  for (auto i : model.topological_order()) {
    const auto& v = model.var(i);
    if (v.kind == VarKind::Utility) continue;
    if (e.values[i] == kUnset) {
      throw Error(ErrorCode::PartialWorld, "world does not assign '" + v.name + "'");
    }
  }
  for (auto i : model.topological_order()) {
    const auto& v = model.var(i);
    const auto row = row_of(v, e.values);
    switch (v.kind) {
      case VarKind::Stochastic: p *= v.cpt[row][e.values[i]]; break;
      case VarKind::Deterministic:
        if (v.table[row] != e.values[i]) return Rational(0);
        break;
      case VarKind::Utility: utility = v.utility[row]; break;
    }
  }
  if (e.utility && *e.utility != utility) return Rational(0);
  return p;
}

WeightedWorlds enumerate_worlds(const DilemmaModel& model, const Assignment& evidence,
                                const InferenceOptions& options) {
  if (const auto size = joint_space_size(model); size > options.max_worlds) {
    throw Error(ErrorCode::ComplexityLimitExceeded, "joint space of " + std::to_string(size) +
                                                        " worlds exceeds the limit of " +
                                                        std::to_string(options.max_worlds));
  }
  const auto e = resolve(model, evidence);
  Enumerator en{model, e, model.topological_order(), {}, std::vector<std::uint32_t>(model.size(), 0)};
  en.run(0, Rational(1), Rational(0));
  return WeightedWorlds(model, std::move(en.out), false);
}

WeightedWorlds condition(const DilemmaModel& model, const Assignment& evidence, const InferenceOptions& options) {
  return enumerate_worlds(model, evidence, options).normalize();
}

Rational expectation(const WeightedWorlds& worlds, std::string_view variable) {
  const auto i = worlds.model().index(variable);
  if (worlds.model().var(i).kind != VarKind::Utility) {
    throw Error(ErrorCode::NonNumericVariable, "'" + std::string(variable) + "' is not the utility variable");
  }
  if (!worlds.normalized()) throw Error(ErrorCode::NotNormalized, "expectation requires normalized worlds");
  Rational sum;
  for (const auto& w : worlds.worlds()) sum += w.weight * w.world.utility;
  return sum;
}

Rational probability(const WeightedWorlds& worlds, const Assignment& event) {
  const auto e = resolve(worlds.model(), event);
  Rational sum;
  for (const auto& w : worlds.worlds()) {
    if (matches(worlds.model(), e, w)) sum += w.weight;
  }
  return sum;
}

std::vector<std::pair<std::string, Rational>> marginal(const WeightedWorlds& worlds, std::string_view variable) {
  const auto i = worlds.model().index(variable);
  const auto& v = worlds.model().var(i);
  if (v.kind == VarKind::Utility) {
    std::map<Rational, Rational> acc;
    for (const auto& w : worlds.worlds()) acc[w.world.utility] += w.weight;
    std::vector<std::pair<std::string, Rational>> out;
    for (const auto& [u, p] : acc) out.emplace_back(u.str(), p);
    return out;
  }
  std::vector<Rational> acc(v.domain.size());
  for (const auto& w : worlds.worlds()) acc[w.world.values[i]] += w.weight;
  std::vector<std::pair<std::string, Rational>> out;
  for (std::size_t k = 0; k < v.domain.size(); ++k) out.emplace_back(v.domain[k], acc[k]);
  return out;
}

}  // namespace dtheory
