#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtheory/model.hpp"

namespace dtheory {

/// Name-keyed assignment. Total when used as a world, partial as evidence.
/// The utility variable may appear in `values` as a rational literal or be
/// given directly through `utility`.
struct Assignment {
  std::map<std::string, std::string> values;
  std::optional<Rational> utility;
};

/// Index-based world: one domain index per variable (the utility slot is
/// unused) plus the utility value.
struct World {
  std::vector<std::uint32_t> values;
  Rational utility;
};

struct WeightedWorld {
  World world;
  Rational weight;
};

class WeightedWorlds {
 public:
  WeightedWorlds(DilemmaModel model, std::vector<WeightedWorld> worlds, bool normalized)
      : model_(std::move(model)), worlds_(std::move(worlds)), normalized_(normalized) {}

  const DilemmaModel& model() const { return model_; }
  const std::vector<WeightedWorld>& worlds() const { return worlds_; }
  std::size_t size() const { return worlds_.size(); }
  bool empty() const { return worlds_.empty(); }
  bool normalized() const { return normalized_; }
  Rational total() const;

  Assignment assignment(std::size_t i) const;
  /// Throws ZeroProbabilityEvidence when the total weight is 0.
  WeightedWorlds normalize() const;

 private:
  DilemmaModel model_;
  std::vector<WeightedWorld> worlds_;
  bool normalized_;
};

struct InferenceOptions {
  std::uint64_t max_worlds = std::uint64_t{1} << 24;
};

/// Size of the joint space over non-utility variables, saturating.
std::uint64_t joint_space_size(const DilemmaModel& model);

Rational joint_probability(const DilemmaModel& model, const Assignment& world);

/// Nonzero-probability worlds consistent with `evidence`, unnormalized, in
/// depth-first topological order.
WeightedWorlds enumerate_worlds(const DilemmaModel& model, const Assignment& evidence = {},
                                const InferenceOptions& options = {});

/// enumerate_worlds renormalized; throws ZeroProbabilityEvidence.
WeightedWorlds condition(const DilemmaModel& model, const Assignment& evidence = {},
                         const InferenceOptions& options = {});

/// Expected value of the utility variable over normalized worlds.
Rational expectation(const WeightedWorlds& worlds, std::string_view variable);

/// Total weight of the worlds matching `event`.
Rational probability(const WeightedWorlds& worlds, const Assignment& event);

std::vector<std::pair<std::string, Rational>> marginal(const WeightedWorlds& worlds, std::string_view variable);

}  // namespace dtheory
