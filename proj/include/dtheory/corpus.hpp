#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dtheory/model.hpp"
#include "dtheory/rename.hpp"
#include "dtheory/theories.hpp"

namespace dtheory {

struct ParamSpec {
  std::string name;
  Rational default_value;
  Rational lo;
  std::optional<Rational> hi;  // unbounded above when empty
  bool lo_open = false;
  bool hi_open = false;
  bool flag = false;  // only 0 or 1
  std::string description;

  bool admits(const Rational& value) const;
  std::string range() const;
};

using Params = std::map<std::string, Rational>;

struct Margin {
  std::string better;
  std::string worse;
  Rational amount;
};

struct PrescriptionExpectation {
  std::vector<ActionValue> per_action;  // unchecked when empty
  std::vector<std::string> chosen;
  std::optional<Margin> margin;
};

struct RatificationExpectation {
  std::optional<std::pair<std::string, std::string>> support;
  ActionPrior prior;
  std::optional<std::vector<std::string>> chosen_at_prior;  // CDT argmax over all actions at the ratified prior
};

struct BestResponseExpectation {
  ActionPrior initial;
  std::size_t budget = 0;
  TraceStatus status = TraceStatus::BudgetExhausted;
  std::size_t period = 0;
  std::size_t max_steps = 0;
};

struct DominanceExpectation {
  std::string a;
  std::string b;
  DominanceResult result = DominanceResult::Neither;
};

using Expectation =
    std::variant<PrescriptionExpectation, RatificationExpectation, BestResponseExpectation, DominanceExpectation>;

struct GoldenEntry {
  std::string label;
  std::string model;  // key into DilemmaSuite::models
  Theory theory = Theory::Edt;
  std::optional<std::string> observation;
  std::optional<ActionPrior> act_prior;  // applied with with_act_prior before evaluating
  Expectation expect;
  std::string note;  // how the expected values were obtained
};

struct DilemmaSuite {
  std::string name;
  std::string title;
  std::vector<ParamSpec> specs;
  Params params;
  std::map<std::string, DilemmaModel> models;
  std::vector<std::string> observations;
  std::vector<GoldenEntry> golden;

  const DilemmaModel& model(std::string_view key) const;
};

std::vector<std::string> suite_names();
std::vector<ParamSpec> param_specs(std::string_view name);

/// Builds a suite. Throws UnknownDilemma, UnknownParameter, ParamOutOfRange.
DilemmaSuite load(std::string_view name, const Params& overrides = {});

DilemmaSuite newcomb(const Rational& accuracy = Rational(99, 100), const Rational& act_prior = Rational(1, 2));
DilemmaSuite twin_pd(const Rational& act_prior = Rational(1, 2));
DilemmaSuite smoking_lesion(const Rational& p = Rational(1, 2), const Rational& q = Rational(0));
DilemmaSuite transparent_newcomb(const Rational& accuracy = Rational(99, 100), const Rational& q = Rational(1),
                                 const Rational& act_prior = Rational(1, 2));
DilemmaSuite parfit_hitchhiker(const Rational& accuracy = Rational(99, 100),
                               const Rational& act_prior = Rational(1, 2));
DilemmaSuite xor_blackmail(const Rational& termite_prior = Rational(1, 2),
                           const Rational& payer_prior = Rational(1, 2));
DilemmaSuite mechanical_blackmail(const Rational& error = Rational(0), const Rational& payer_prior = Rational(1, 2));
DilemmaSuite death_in_damascus(const Rational& flee_cost = Rational(1000), const Rational& coin_price = Rational(1),
                               bool include_coin = false, const Rational& act_prior = Rational(1, 2));
DilemmaSuite cosmic_ray(const Rational& ray_prob = Rational(1, 1000000),
                        const Rational& disposition_prior = Rational(1, 1000000000));

/// The variable and value substitution that turns the Newcomb EDT/CDT
/// models into the smoking-lesion ones.
RenameMap smoking_lesion_renaming();

// ---- golden verification ----

struct GoldenCheck {
  std::string label;
  bool pass = false;
  std::vector<std::string> diffs;  // expected vs computed, exact
  std::string computed;            // one-line summary of what the engine produced
};

struct GoldenReport {
  std::string suite;
  std::vector<GoldenCheck> checks;

  bool pass() const;
  std::size_t failures() const;
};

GoldenReport verify_golden(const DilemmaSuite& suite);

}  // namespace dtheory
