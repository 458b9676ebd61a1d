#include "dtheory/corpus.hpp"

#include <algorithm>
#include <functional>

namespace dtheory {

namespace {

using Strings = std::vector<std::string>;

const Rational kMillion(1000000);

Rational one_minus(const Rational& x) { return Rational(1) - x; }

// ---- golden helpers ----

std::vector<std::string> argmax(const std::vector<ActionValue>& table) {
  std::vector<std::string> out;
  if (table.empty()) return out;
  Rational best = table.front().eu;
  for (const auto& av : table) best = std::max(best, av.eu);
  for (const auto& av : table) {
    if (av.eu == best) out.push_back(av.action);
  }
  return out;
}

PrescriptionExpectation table(std::vector<ActionValue> values, std::optional<Margin> margin = std::nullopt) {
  PrescriptionExpectation e;
  e.chosen = argmax(values);
  e.per_action = std::move(values);
  e.margin = std::move(margin);
  return e;
}

GoldenEntry entry(std::string label, std::string model, Theory theory, std::optional<std::string> obs,
                  Expectation expect, std::string note) {
  GoldenEntry g;
  g.label = std::move(label);
  g.model = std::move(model);
  g.theory = theory;
  g.observation = std::move(obs);
  g.expect = std::move(expect);
  g.note = std::move(note);
  return g;
}

ActionPrior two_point(const std::string& a, const Rational& pa, const std::string& b) {
  return {{a, pa}, {b, one_minus(pa)}};
}

// ---- parameter handling ----

ParamSpec unit_param(std::string name, Rational def, bool lo_open, bool hi_open, std::string description) {
  ParamSpec s;
  s.name = std::move(name);
  s.default_value = std::move(def);
  s.lo = Rational(0);
  s.hi = Rational(1);
  s.lo_open = lo_open;
  s.hi_open = hi_open;
  s.description = std::move(description);
  return s;
}

ParamSpec act_prior_param(const std::string& first_action) {
  return unit_param("act_prior", Rational(1, 2), true, true, "prior probability of " + first_action);
}

// ---- Newcomb family ----

std::string outcome_code(const std::string& act, const std::string& box) {
  return std::string(act == "twobox" ? "2" : "1") + (box == "full" ? "f" : "e");
}

Rational newcomb_payoff(const std::string& outcome) {
  if (outcome == "2f") return Rational(1001000);
  if (outcome == "1f") return Rational(1000000);
  if (outcome == "2e") return Rational(1000);
  return Rational(0);
}

std::string predict(bool predicted_onebox, const std::string& accurate) {
  return (predicted_onebox == (accurate == "accurate")) ? "1" : "2";
}

ModelBuilder& newcomb_tail(ModelBuilder& b, const std::string& predictor_input) {
  return b
      .function("Prediction", {"1", "2"}, {predictor_input, "Accurate"},
                [](const Row& r) { return predict(r[0] == "oneboxer" || r[0] == "onebox", r[1]); })
      .function("BoxB", {"full", "empty"}, {"Prediction"},
                [](const Row& r) -> std::string { return r[0] == "1" ? "full" : "empty"; })
      .function("Outcome", {"2f", "1f", "2e", "1e"}, {"Act", "BoxB"},
                [](const Row& r) { return outcome_code(r[0], r[1]); })
      .utility("V", {"Outcome"}, [](const Row& r) { return newcomb_payoff(r[0]); });
}

DilemmaModel newcomb_edt_model(const Rational& acc, const Rational& pi) {
  ModelBuilder b("newcomb/edt");
  b.prior("Act", {"onebox", "twobox"}, {pi, one_minus(pi)})
      .function("Predisposition", {"oneboxer", "twoboxer"}, {"Act"},
                [](const Row& r) -> std::string { return r[0] == "onebox" ? "oneboxer" : "twoboxer"; })
      .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)});
  newcomb_tail(b, "Predisposition");
  return b.build({"Act", std::nullopt, "V", {}, std::nullopt});
}

DilemmaModel newcomb_cdt_model(const Rational& acc, const Rational& pi) {
  ModelBuilder b("newcomb/cdt");
  b.prior("Predisposition", {"oneboxer", "twoboxer"}, {pi, one_minus(pi)})
      .function("Act", {"onebox", "twobox"}, {"Predisposition"},
                [](const Row& r) -> std::string { return r[0] == "oneboxer" ? "onebox" : "twobox"; })
      .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)});
  newcomb_tail(b, "Predisposition");
  return b.build({"Act", std::nullopt, "V", {}, std::nullopt});
}

DilemmaModel newcomb_fdt_model(const Rational& acc) {
  ModelBuilder b("newcomb/fdt");
  b.prior("fdt", {"onebox", "twobox"}, {Rational(1, 2), Rational(1, 2)})
      .function("Act", {"onebox", "twobox"}, {"fdt"}, [](const Row& r) { return r[0]; })
      .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)});
  newcomb_tail(b, "fdt");
  return b.build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "fdt"}}, std::nullopt});
}

// EU of one-boxing and two-boxing when the prediction tracks the act.
std::vector<ActionValue> newcomb_correlated(const Rational& acc, const std::string& one, const std::string& two) {
  return {{one, acc * kMillion}, {two, one_minus(acc) * Rational(1001000) + acc * Rational(1000)}};
}

// EU when the box is independent of the act: P(full) = pi*acc + (1-pi)*(1-acc).
std::vector<ActionValue> newcomb_severed(const Rational& acc, const Rational& pi, const std::string& one,
                                         const std::string& two) {
  const auto full = pi * acc + one_minus(pi) * one_minus(acc);
  return {{one, full * kMillion}, {two, full * kMillion + Rational(1000)}};
}

DilemmaSuite build_newcomb(const Params& p) {
  const auto& acc = p.at("accuracy");
  const auto& pi = p.at("act_prior");
  DilemmaSuite s;
  s.models.emplace("edt", newcomb_edt_model(acc, pi));
  s.models.emplace("cdt", newcomb_cdt_model(acc, pi));
  s.models.emplace("fdt", newcomb_fdt_model(acc));

  const auto correlated = newcomb_correlated(acc, "onebox", "twobox");
  s.golden.push_back(entry("edt", "edt", Theory::Edt, std::nullopt, table(correlated),
                           "onebox = acc*1000000; twobox = (1-acc)*1001000 + acc*1000"));
  s.golden.push_back(entry("cdt", "cdt", Theory::Cdt, std::nullopt,
                           table(newcomb_severed(acc, pi, "onebox", "twobox"), Margin{"twobox", "onebox", 1000}),
                           "P(full) fixed by the prior; twobox adds 1000"));
  s.golden.push_back(entry("fdt", "fdt", Theory::Fdt, std::nullopt, table(correlated),
                           "prediction follows the intervened decision"));
  for (const auto& alt : {Rational(1, 10), Rational(9, 10)}) {
    auto g = entry("cdt act_prior=" + alt.str(), "cdt", Theory::Cdt, std::nullopt,
                   table(newcomb_severed(acc, alt, "onebox", "twobox"), Margin{"twobox", "onebox", 1000}),
                   "margin does not depend on the act prior");
    g.act_prior = two_point("onebox", alt, "twobox");
    s.golden.push_back(std::move(g));
  }
  s.golden.push_back(entry("cdt dominance", "cdt", Theory::Cdt, std::nullopt,
                           DominanceExpectation{"twobox", "onebox", DominanceResult::Dominates},
                           "twobox is 1000 better in every exogenous cell"));
  const auto fdt_gap = correlated[0].eu - correlated[1].eu;
  s.golden.push_back(entry(
      "fdt dominance", "fdt", Theory::Fdt, std::nullopt,
      DominanceExpectation{"onebox", "twobox",
                           fdt_gap.sign() > 0   ? DominanceResult::Dominates
                           : fdt_gap.sign() < 0 ? DominanceResult::Dominated
                                                : DominanceResult::Neither},
      "accuracy noise is absorbed; one cell compares the two EUs"));
  s.golden.push_back(entry("cdt ratify", "cdt", Theory::Cdt, std::nullopt,
                           RatificationExpectation{std::nullopt, {{"onebox", 0}, {"twobox", 1}}, std::nullopt},
                           "twobox is a pure fixed point"));
  s.golden.push_back(entry("cdt best response", "cdt", Theory::Cdt, std::nullopt,
                           BestResponseExpectation{two_point("onebox", pi, "twobox"), 5, TraceStatus::Converged, 0, 2},
                           "one update to twobox, then a fixed point"));
  return s;
}

DilemmaSuite build_twin(const Params& p) {
  const auto& pi = p.at("act_prior");
  auto payoff = [](const std::string& mine, const std::string& theirs) {
    if (mine == "cooperate") return theirs == "cooperate" ? Rational(1000000) : Rational(0);
    return theirs == "cooperate" ? Rational(1001000) : Rational(1000);
  };
  const Strings acts{"cooperate", "defect"};
  DilemmaSuite s;
  s.models.emplace("edt", ModelBuilder("twin_pd/edt")
                              .prior("Act", acts, {pi, one_minus(pi)})
                              .function("TwinAct", acts, {"Act"}, [](const Row& r) { return r[0]; })
                              .utility("V", {"Act", "TwinAct"}, [&](const Row& r) { return payoff(r[0], r[1]); })
                              .build({"Act", std::nullopt, "V", {}, std::nullopt}));
  auto from_disposition = [](const Row& r) -> std::string { return r[0] == "cooperator" ? "cooperate" : "defect"; };
  s.models.emplace("cdt", ModelBuilder("twin_pd/cdt")
                              .prior("Disposition", {"cooperator", "defector"}, {pi, one_minus(pi)})
                              .function("Act", acts, {"Disposition"}, from_disposition)
                              .function("TwinAct", acts, {"Disposition"}, from_disposition)
                              .utility("V", {"Act", "TwinAct"}, [&](const Row& r) { return payoff(r[0], r[1]); })
                              .build({"Act", std::nullopt, "V", {}, std::nullopt}));
  s.models.emplace("fdt", ModelBuilder("twin_pd/fdt")
                              .prior("fdt", acts, {Rational(1, 2), Rational(1, 2)})
                              .function("Act", acts, {"fdt"}, [](const Row& r) { return r[0]; })
                              .function("TwinAct", acts, {"fdt"}, [](const Row& r) { return r[0]; })
                              .utility("V", {"Act", "TwinAct"}, [&](const Row& r) { return payoff(r[0], r[1]); })
                              .build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "fdt"}}, std::nullopt}));

  const std::vector<ActionValue> mirrored{{"cooperate", kMillion}, {"defect", Rational(1000)}};
  s.golden.push_back(entry("edt", "edt", Theory::Edt, std::nullopt, table(mirrored), "the twin copies the act"));
  s.golden.push_back(entry("cdt", "cdt", Theory::Cdt, std::nullopt,
                           table({{"cooperate", pi * kMillion},
                                  {"defect", pi * Rational(1001000) + one_minus(pi) * Rational(1000)}}),
                           "twin fixed by the disposition prior"));
  s.golden.push_back(entry("fdt", "fdt", Theory::Fdt, std::nullopt, table(mirrored),
                           "one decision function drives both players; defecting twins get 1000"));
  s.golden.push_back(entry("cdt dominance", "cdt", Theory::Cdt, std::nullopt,
                           DominanceExpectation{"defect", "cooperate", DominanceResult::Dominates},
                           "defect is better against either twin move"));
  return s;
}

RenameMap lesion_map() {
  RenameMap m;
  m.variables = {{"Predisposition", "Lesion"}, {"Accurate", "Luck"}, {"Prediction", "Cancer"}, {"BoxB", "Death"}};
  m.values = {{"oneboxer", "nolesion"},   {"twoboxer", "lesion"},       {"accurate", "unlucky"},
              {"inaccurate", "lucky"},    {"1", "nocancer"},            {"2", "cancer"},
              {"empty", "dead"},          {"full", "alive"},            {"twobox", "smoke"},
              {"onebox", "refrain"},      {"2f", "smoke_alive"},        {"1f", "refrain_alive"},
              {"2e", "smoke_dead"},       {"1e", "refrain_dead"}};
  return m;
}

const Strings kLesionActs{"refrain", "smoke"};
const Strings kLesionOutcomes{"smoke_alive", "refrain_alive", "smoke_dead", "refrain_dead"};

std::string cancer_of(const std::string& lesion, const std::string& luck) {
  return ((lesion == "nolesion") == (luck == "unlucky")) ? "nocancer" : "cancer";
}

std::string lesion_outcome(const std::string& act, const std::string& death) { return act + "_" + death; }

Rational lesion_payoff_s(const std::string& outcome) {
  if (outcome == "smoke_alive") return Rational(1001000);
  if (outcome == "refrain_alive") return Rational(1000000);
  if (outcome == "smoke_dead") return Rational(1000);
  return Rational(0);
}

Rational lesion_payoff_r(const std::string& outcome) {
  if (outcome == "smoke_alive") return Rational(999999);
  if (outcome == "refrain_alive") return Rational(1000000);
  if (outcome == "smoke_dead") return Rational(-1);
  return Rational(0);
}

ModelBuilder& lesion_tail(ModelBuilder& b, const std::function<Rational(const std::string&)>& payoff) {
  return b.prior("Luck", {"unlucky", "lucky"}, {Rational(99, 100), Rational(1, 100)})
      .function("Cancer", {"nocancer", "cancer"}, {"Lesion", "Luck"},
                [](const Row& r) { return cancer_of(r[0], r[1]); })
      .function("Death", {"alive", "dead"}, {"Cancer"},
                [](const Row& r) -> std::string { return r[0] == "nocancer" ? "alive" : "dead"; })
      .function("Outcome", kLesionOutcomes, {"Act", "Death"}, [](const Row& r) { return lesion_outcome(r[0], r[1]); })
      .utility("V", {"Outcome"}, [payoff](const Row& r) { return payoff(r[0]); });
}

DilemmaModel lesion_fdt_model(const Rational& p, const Rational& q, bool r_preferences) {
  ModelBuilder b(r_preferences ? "smoking_lesion/fdt_r" : "smoking_lesion/fdt");
  b.prior("Lesion", {"nolesion", "lesion"}, {one_minus(p), p})
      .prior("fdt_S", kLesionActs, {Rational(1, 2), Rational(1, 2)})
      .prior("fdt_R", kLesionActs, {one_minus(q), q})
      .function("Act", kLesionActs, {"Lesion", "fdt_S", "fdt_R"},
                [](const Row& r) { return r[0] == "lesion" ? r[1] : r[2]; });
  lesion_tail(b, r_preferences ? lesion_payoff_r : lesion_payoff_s);
  const std::string self = r_preferences ? "fdt_R" : "fdt_S";
  return b.build({"Act", std::nullopt, "V", {{std::string(kNoObservation), self}}, self});
}

DilemmaSuite build_lesion(const Params& params) {
  const auto& p = params.at("p");
  const auto& q = params.at("q");
  const Rational luck(99, 100);
  DilemmaSuite s;

  // Eve's and Carl's models mirror the Newcomb networks under lesion_map().
  {
    ModelBuilder b("smoking_lesion/edt");
    b.prior("Act", kLesionActs, {one_minus(p), p})
        .function("Lesion", {"nolesion", "lesion"}, {"Act"},
                  [](const Row& r) -> std::string { return r[0] == "refrain" ? "nolesion" : "lesion"; });
    lesion_tail(b, lesion_payoff_s);
    s.models.emplace("edt", b.build({"Act", std::nullopt, "V", {}, std::nullopt}));
  }
  {
    ModelBuilder b("smoking_lesion/cdt");
    b.prior("Lesion", {"nolesion", "lesion"}, {one_minus(p), p})
        .function("Act", kLesionActs, {"Lesion"},
                  [](const Row& r) -> std::string { return r[0] == "nolesion" ? "refrain" : "smoke"; });
    lesion_tail(b, lesion_payoff_s);
    s.models.emplace("cdt", b.build({"Act", std::nullopt, "V", {}, std::nullopt}));
  }
  s.models.emplace("fdt", lesion_fdt_model(p, q, false));
  s.models.emplace("fdt_r", lesion_fdt_model(p, q, true));

  s.golden.push_back(entry("edt", "edt", Theory::Edt, std::nullopt, table(newcomb_correlated(luck, "refrain", "smoke")),
                           "renamed Newcomb: refrain = 990000, smoke = 11000"));
  s.golden.push_back(entry("cdt", "cdt", Theory::Cdt, std::nullopt,
                           table(newcomb_severed(luck, one_minus(p), "refrain", "smoke"), Margin{"smoke", "refrain", 1000}),
                           "renamed Newcomb; smoking adds 1000"));
  const auto rest = one_minus(p) * (Rational(990000) + q * Rational(1000));
  s.golden.push_back(entry("fdt", "fdt", Theory::Fdt, std::nullopt,
                           table({{"refrain", p * Rational(10000) + rest}, {"smoke", p * Rational(11000) + rest}},
                                 Margin{"smoke", "refrain", p * Rational(1000)}),
                           "smoke = p*11000 + (1-p)(990000 + 1000q); refrain = p*10000 + same"));
  const auto lesion_branch = p * Rational(19999, 2);
  s.golden.push_back(entry("fdt under U_R", "fdt_r", Theory::Fdt, std::nullopt,
                           table({{"refrain", lesion_branch + one_minus(p) * Rational(990000)},
                                  {"smoke", lesion_branch + one_minus(p) * Rational(989999)}},
                                 Margin{"refrain", "smoke", one_minus(p)}),
                           "lesion branch runs the other function; nolesion branch loses 1 by smoking"));
  return s;
}

DilemmaSuite build_transparent(const Params& params) {
  const auto& acc = params.at("accuracy");
  const auto& q = params.at("q");
  const auto& pi = params.at("act_prior");
  const Strings acts{"onebox", "twobox"};
  auto box_payoff = [](const Row& r) { return newcomb_payoff(outcome_code(r[0], r[1])); };
  auto seen = [](const Row& r) { return r[0]; };
  DilemmaSuite s;
  s.observations = {"full", "empty"};
  {
    ModelBuilder b("transparent_newcomb/edt");
    b.prior("Act", acts, {pi, one_minus(pi)})
        .function("Predisposition", {"oneboxer", "twoboxer"}, {"Act"},
                  [](const Row& r) -> std::string { return r[0] == "onebox" ? "oneboxer" : "twoboxer"; })
        .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)});
    newcomb_tail(b, "Predisposition").function("Obs", {"full", "empty"}, {"BoxB"}, seen);
    s.models.emplace("edt", b.build({"Act", "Obs", "V", {}, std::nullopt}));
  }
  s.models.emplace(
      "cdt", ModelBuilder("transparent_newcomb/cdt")
                 .prior("Predisposition", {"oneboxer", "twoboxer"}, {pi, one_minus(pi)})
                 .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)})
                 .function("Prediction", {"1", "2"}, {"Predisposition", "Accurate"},
                           [](const Row& r) { return predict(r[0] == "oneboxer", r[1]); })
                 .function("BoxB", {"full", "empty"}, {"Prediction"},
                           [](const Row& r) -> std::string { return r[0] == "1" ? "full" : "empty"; })
                 .function("Obs", {"full", "empty"}, {"BoxB"}, seen)
                 .function("Act", acts, {"Predisposition", "Obs"},
                           [](const Row& r) -> std::string { return r[0] == "oneboxer" ? "onebox" : "twobox"; })
                 .utility("V", {"Act", "BoxB"}, box_payoff)
                 .build({"Act", "Obs", "V", {}, std::nullopt}));
  s.models.emplace(
      "fdt", ModelBuilder("transparent_newcomb/fdt")
                 .prior("fdt_full", acts, {Rational(1, 2), Rational(1, 2)})
                 .prior("fdt_empty", acts, {one_minus(q), q})
                 .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)})
                 .function("Prediction", {"1", "2"}, {"fdt_full", "Accurate"},
                           [](const Row& r) { return predict(r[0] == "onebox", r[1]); })
                 .function("BoxB", {"full", "empty"}, {"Prediction"},
                           [](const Row& r) -> std::string { return r[0] == "1" ? "full" : "empty"; })
                 .function("Obs", {"full", "empty"}, {"BoxB"}, seen)
                 .function("Act", acts, {"fdt_full", "fdt_empty", "Prediction"},
                           [](const Row& r) { return r[2] == "1" ? r[0] : r[1]; })
                 .utility("V", {"Act", "BoxB"}, box_payoff)
                 .build({"Act", "Obs", "V", {{"full", "fdt_full"}, {"empty", "fdt_empty"}}, std::nullopt}));

  const std::vector<ActionValue> full_box{{"onebox", kMillion}, {"twobox", Rational(1001000)}};
  const std::vector<ActionValue> empty_box{{"onebox", Rational(0)}, {"twobox", Rational(1000)}};
  s.golden.push_back(entry("edt full", "edt", Theory::Edt, "full", table(full_box), "box seen full"));
  s.golden.push_back(entry("cdt full", "cdt", Theory::Cdt, "full", table(full_box), "box seen full"));
  s.golden.push_back(entry("edt empty", "edt", Theory::Edt, "empty", table(empty_box), "box seen empty"));
  s.golden.push_back(entry("cdt empty", "cdt", Theory::Cdt, "empty", table(empty_box), "box seen empty"));
  s.golden.push_back(entry(
      "fdt full", "fdt", Theory::Fdt, "full",
      table({{"onebox", acc * kMillion + one_minus(acc) * q * Rational(1000)},
             {"twobox", one_minus(acc) * Rational(1001000) + acc * q * Rational(1000)}}),
      "onebox = acc*1000000 + (1-acc)*q*1000; twobox = (1-acc)*1001000 + acc*q*1000"));
  // fdt_full stays at 1/2, so each prediction has probability 1/2; under
  // prediction 1 the box is full and fdt_full is onebox with probability acc.
  const Rational full_branch = Rational(1, 2) * (acc * kMillion + one_minus(acc) * Rational(1001000));
  s.golden.push_back(entry("fdt empty", "fdt", Theory::Fdt, "empty",
                           table({{"onebox", full_branch}, {"twobox", full_branch + Rational(500)}}),
                           "(acc*1000000 + (1-acc)*1001000)/2 from the full branch; twobox adds 1000/2"));
  return s;
}

DilemmaSuite build_parfit(const Params& params) {
  const auto& acc = params.at("accuracy");
  const auto& pi = params.at("act_prior");
  const Strings acts{"pay", "refuse"};
  auto payoff = [](const Row& r) {
    if (r[0] == "desert") return Rational(0);
    return r[1] == "pay" ? Rational(999000) : kMillion;
  };
  auto driver = [](bool predicted_pay, const std::string& accurate) -> std::string {
    return (predicted_pay == (accurate == "accurate")) ? "city" : "desert";
  };
  DilemmaSuite s;
  s.observations = {"city", "desert"};
  s.models.emplace("edt", ModelBuilder("parfit_hitchhiker/edt")
                              .prior("Act", acts, {pi, one_minus(pi)})
                              .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)})
                              .function("Location", {"city", "desert"}, {"Act", "Accurate"},
                                        [&](const Row& r) { return driver(r[0] == "pay", r[1]); })
                              .utility("V", {"Location", "Act"}, payoff)
                              .build({"Act", "Location", "V", {}, std::nullopt}));
  s.models.emplace("cdt", ModelBuilder("parfit_hitchhiker/cdt")
                              .prior("Disposition", {"payer", "refuser"}, {pi, one_minus(pi)})
                              .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)})
                              .function("Location", {"city", "desert"}, {"Disposition", "Accurate"},
                                        [&](const Row& r) { return driver(r[0] == "payer", r[1]); })
                              .function("Act", acts, {"Disposition"},
                                        [](const Row& r) -> std::string { return r[0] == "payer" ? "pay" : "refuse"; })
                              .utility("V", {"Location", "Act"}, payoff)
                              .build({"Act", "Location", "V", {}, std::nullopt}));
  s.models.emplace("fdt", ModelBuilder("parfit_hitchhiker/fdt")
                              .prior("fdt_city", acts, {Rational(1, 2), Rational(1, 2)})
                              .prior("fdt_desert", acts, {Rational(1, 2), Rational(1, 2)})
                              .prior("Accurate", {"accurate", "inaccurate"}, {acc, one_minus(acc)})
                              .function("Location", {"city", "desert"}, {"fdt_city", "Accurate"},
                                        [&](const Row& r) { return driver(r[0] == "pay", r[1]); })
                              .function("Act", acts, {"fdt_city", "fdt_desert", "Location"},
                                        [](const Row& r) { return r[2] == "city" ? r[0] : r[1]; })
                              .utility("V", {"Location", "Act"}, payoff)
                              .build({"Act", "Location", "V", {{"city", "fdt_city"}, {"desert", "fdt_desert"}},
                                      std::nullopt}));

  const std::vector<ActionValue> in_city{{"pay", Rational(999000)}, {"refuse", kMillion}};
  s.golden.push_back(entry("edt city", "edt", Theory::Edt, "city", table(in_city), "already rescued"));
  s.golden.push_back(entry("cdt city", "cdt", Theory::Cdt, "city", table(in_city), "already rescued"));
  s.golden.push_back(entry("fdt city", "fdt", Theory::Fdt, "city",
                           table({{"pay", acc * Rational(999000)}, {"refuse", one_minus(acc) * kMillion}}),
                           "pay = acc*999000; refuse = (1-acc)*1000000"));
  return s;
}

DilemmaSuite build_xor(const Params& params) {
  const auto& t = params.at("termite_prior");
  const auto& pi = params.at("payer_prior");
  const Strings acts{"pay", "refuse"};
  auto payoff = [](const Row& r) {
    return Rational(r[0] == "termites" ? -1000000 : 0) + Rational(r[1] == "pay" ? -1000 : 0);
  };
  auto letter = [](const std::string& infestation, bool pays) -> std::string {
    return ((infestation == "no_termites") == pays) ? "letter" : "no_letter";
  };
  auto seen = [](const Row& r) { return r[0]; };
  DilemmaSuite s;
  s.observations = {"letter", "no_letter"};
  auto shared = [&](const std::string& name) {
    return ModelBuilder(name)
        .prior("Infestation", {"termites", "no_termites"}, {t, one_minus(t)})
        .prior("Disposition", {"payer", "refuser"}, {pi, one_minus(pi)})
        .function("Predictor", {"letter", "no_letter"}, {"Infestation", "Disposition"},
                  [&](const Row& r) { return letter(r[0], r[1] == "payer"); })
        .function("Obs", {"letter", "no_letter"}, {"Predictor"}, seen)
        .function("Act", acts, {"Disposition", "Obs"},
                  [](const Row& r) -> std::string {
                    return (r[1] == "letter" && r[0] == "payer") ? "pay" : "refuse";
                  })
        .utility("V", {"Infestation", "Act"}, payoff)
        .build({"Act", "Obs", "V", {}, std::nullopt});
  };
  s.models.emplace("edt", shared("xor_blackmail/edt"));
  s.models.emplace("cdt", shared("xor_blackmail/cdt"));
  s.models.emplace("fdt", ModelBuilder("xor_blackmail/fdt")
                              .prior("Infestation", {"termites", "no_termites"}, {t, one_minus(t)})
                              .prior("fdt_letter", acts, {Rational(1, 2), Rational(1, 2)})
                              .prior("fdt_none", acts, {Rational(0), Rational(1)})
                              .function("Predictor", {"letter", "no_letter"}, {"Infestation", "fdt_letter"},
                                        [&](const Row& r) { return letter(r[0], r[1] == "pay"); })
                              .function("Obs", {"letter", "no_letter"}, {"Predictor"}, seen)
                              .function("Act", acts, {"fdt_letter", "fdt_none", "Predictor"},
                                        [](const Row& r) { return r[2] == "letter" ? r[0] : r[1]; })
                              .utility("V", {"Infestation", "Act"}, payoff)
                              .build({"Act", "Obs", "V", {{"letter", "fdt_letter"}, {"no_letter", "fdt_none"}},
                                      std::nullopt}));

  std::vector<ActionValue> edt_letter{{"pay", Rational(-1000)}};
  if (pi < Rational(1)) edt_letter.push_back({"refuse", Rational(-1000000)});
  s.golden.push_back(entry("edt letter", "edt", Theory::Edt, "letter", table(edt_letter),
                           "paying implies no termites, refusing implies termites"));
  const auto bad = t * one_minus(pi);
  const auto tau = bad / (bad + one_minus(t) * pi);
  s.golden.push_back(entry("cdt letter", "cdt", Theory::Cdt, "letter",
                           table({{"pay", Rational(-1000) - tau * kMillion}, {"refuse", -(tau * kMillion)}},
                                 Margin{"refuse", "pay", 1000}),
                           "P(termites | letter) unaffected by the act; paying costs 1000"));
  s.golden.push_back(entry("fdt letter", "fdt", Theory::Fdt, "letter",
                           table({{"pay", -(t * kMillion) - one_minus(t) * Rational(1000)}, {"refuse", -(t * kMillion)}},
                                 Margin{"refuse", "pay", one_minus(t) * Rational(1000)}),
                           "termites cost the same either way; paying costs 1000 when termite-free"));
  return s;
}

DilemmaSuite build_mechanical(const Params& params) {
  const auto& err = params.at("error");
  const auto& pi = params.at("payer_prior");
  const Strings acts{"pay", "refuse"};
  auto payoff = [](const Row& r) {
    if (r[0] == "none") return Rational(0);
    return r[1] == "pay" ? Rational(-1000) : Rational(-1000000);
  };
  auto blackmail_row = [&err](bool pays) {
    return pays ? std::vector<Rational>{Rational(1), Rational(0)} : std::vector<Rational>{err, one_minus(err)};
  };
  DilemmaSuite s;
  s.observations = {"blackmail", "none"};
  auto carl = [&](const std::string& name) {
    return ModelBuilder(name)
        .prior("Disposition", {"payer", "refuser"}, {pi, one_minus(pi)})
        .cpt("Blackmailer", {"blackmail", "none"}, {"Disposition"},
             [&](const Row& r) { return blackmail_row(r[0] == "payer"); })
        .function("Act", acts, {"Disposition", "Blackmailer"},
                  [](const Row& r) -> std::string {
                    return (r[1] == "blackmail" && r[0] == "payer") ? "pay" : "refuse";
                  })
        .utility("V", {"Blackmailer", "Act"}, payoff)
        .build({"Act", "Blackmailer", "V", {}, std::nullopt});
  };
  s.models.emplace("edt", carl("mechanical_blackmail/edt"));
  s.models.emplace("cdt", carl("mechanical_blackmail/cdt"));
  s.models.emplace("fdt", ModelBuilder("mechanical_blackmail/fdt")
                              .prior("fdt_blackmail", acts, {Rational(1, 2), Rational(1, 2)})
                              .prior("fdt_none", acts, {Rational(0), Rational(1)})
                              .cpt("Blackmailer", {"blackmail", "none"}, {"fdt_blackmail"},
                                   [&](const Row& r) { return blackmail_row(r[0] == "pay"); })
                              .function("Act", acts, {"fdt_blackmail", "fdt_none", "Blackmailer"},
                                        [](const Row& r) { return r[2] == "blackmail" ? r[0] : r[1]; })
                              .utility("V", {"Blackmailer", "Act"}, payoff)
                              .build({"Act", "Blackmailer", "V",
                                      {{"blackmail", "fdt_blackmail"}, {"none", "fdt_none"}}, std::nullopt}));

  std::vector<ActionValue> edt_table{{"pay", Rational(-1000)}};
  if (err.sign() > 0) edt_table.push_back({"refuse", Rational(-1000000)});
  s.golden.push_back(entry("edt blackmail", "edt", Theory::Edt, "blackmail", table(edt_table),
                           "the program is already running"));
  s.golden.push_back(entry("cdt blackmail", "cdt", Theory::Cdt, "blackmail",
                           table({{"pay", Rational(-1000)}, {"refuse", Rational(-1000000)}}),
                           "the program is already running"));
  s.golden.push_back(entry("fdt blackmail", "fdt", Theory::Fdt, "blackmail",
                           table({{"pay", Rational(-1000)}, {"refuse", -(err * kMillion)}}),
                           "pay = -1000; refuse = -error*1000000; break-even at error = 1/1000"));
  return s;
}

DilemmaSuite build_damascus(const Params& params) {
  const auto& c = params.at("flee_cost");
  const auto& price = params.at("coin_price");
  const bool coin = params.at("include_coin") == Rational(1);
  const auto& pi = params.at("act_prior");

  Strings acts{"damascus", "aleppo"};
  if (coin) acts.push_back("coin");
  std::vector<Rational> prior{pi, one_minus(pi)};
  if (coin) prior.emplace_back(0);
  const Strings cities{"damascus", "aleppo"};
  auto book_of = [](const std::string& decision) -> std::string {
    return decision == "aleppo" ? "aleppo" : "damascus";
  };

  // Adds Location (when the coin exists), Book and V downstream of `source`.
  auto finish = [&](ModelBuilder& b, const std::string& book_source,
                    const std::function<std::string(const std::string&)>& decision_of) {
    b.function("Book", cities, {book_source}, [&](const Row& r) { return book_of(decision_of(r[0])); });
    if (coin) {
      b.prior("Coin", {"heads", "tails"}, {Rational(1, 2), Rational(1, 2)})
          .function("Location", cities, {"Act", "Coin"}, [](const Row& r) -> std::string {
            if (r[0] != "coin") return r[0];
            return r[1] == "heads" ? "damascus" : "aleppo";
          });
      b.utility("V", {"Act", "Location", "Book"}, [&](const Row& r) {
        Rational v = r[1] != r[2] ? kMillion : Rational(0);
        if (r[1] == "aleppo") v -= c;
        if (r[0] == "coin") v -= price;
        return v;
      });
    } else {
      b.utility("V", {"Act", "Book"}, [&](const Row& r) {
        Rational v = r[0] != r[1] ? kMillion : Rational(0);
        if (r[0] == "aleppo") v -= c;
        return v;
      });
    }
  };
  auto same = [](const std::string& s) { return s; };

  DilemmaSuite s;
  {
    ModelBuilder b("death_in_damascus/edt");
    b.prior("Act", acts, prior);
    finish(b, "Act", same);
    s.models.emplace("edt", b.build({"Act", std::nullopt, "V", {}, std::nullopt}));
  }
  {
    ModelBuilder b("death_in_damascus/cdt");
    Strings dispositions{"stayer", "fleer"};
    if (coin) dispositions.push_back("tosser");
    auto decision = [](const std::string& d) -> std::string {
      if (d == "stayer") return "damascus";
      if (d == "fleer") return "aleppo";
      return "coin";
    };
    b.prior("Disposition", dispositions, prior)
        .function("Act", acts, {"Disposition"}, [decision](const Row& r) { return decision(r[0]); });
    finish(b, "Disposition", decision);
    s.models.emplace("cdt", b.build({"Act", std::nullopt, "V", {}, std::nullopt}));
  }
  {
    ModelBuilder b("death_in_damascus/fdt");
    std::vector<Rational> uniform(acts.size(), Rational(1, static_cast<long>(acts.size())));
    b.prior("fdt", acts, uniform).function("Act", acts, {"fdt"}, [](const Row& r) { return r[0]; });
    finish(b, "fdt", same);
    s.models.emplace("fdt", b.build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "fdt"}}, std::nullopt}));
  }

  const auto coin_fdt = (kMillion - c) / Rational(2) - price;
  const auto coin_cdt = Rational(500000) - c / Rational(2) - price;
  std::vector<ActionValue> fdt_table{{"damascus", Rational(0)}, {"aleppo", -c}};
  std::vector<ActionValue> edt_table = fdt_table;
  std::vector<ActionValue> cdt_table{{"damascus", one_minus(pi) * kMillion}, {"aleppo", pi * kMillion - c}};
  if (coin) {
    fdt_table.push_back({"coin", coin_fdt});
    cdt_table.push_back({"coin", coin_cdt});
  }
  s.golden.push_back(entry("edt", "edt", Theory::Edt, std::nullopt, table(edt_table), "Death reads the act"));
  s.golden.push_back(entry("cdt", "cdt", Theory::Cdt, std::nullopt, table(cdt_table),
                           "Book follows the disposition prior"));
  s.golden.push_back(entry("fdt", "fdt", Theory::Fdt, std::nullopt, table(fdt_table),
                           coin ? "coin = (1000000 - flee_cost)/2 - coin_price" : "Death is wherever the agent goes"));

  const auto pi_star = (kMillion + c) / Rational(2000000);
  ActionPrior ratified{{"damascus", pi_star}, {"aleppo", one_minus(pi_star)}};
  if (coin) ratified["coin"] = Rational(0);
  std::vector<ActionValue> at_ratified{{"damascus", one_minus(pi_star) * kMillion},
                                       {"aleppo", pi_star * kMillion - c}};
  if (coin) at_ratified.push_back({"coin", coin_cdt});
  s.golden.push_back(entry("cdt ratify", "cdt", Theory::Cdt, std::nullopt,
                           RatificationExpectation{std::make_pair(std::string("damascus"), std::string("aleppo")),
                                                   ratified, argmax(at_ratified)},
                           "P(damascus) = (1000000 + flee_cost)/2000000"));
  for (const auto& start : {std::string("damascus"), std::string("aleppo")}) {
    ActionPrior initial;
    for (const auto& a : acts) initial[a] = Rational(a == start ? 1 : 0);
    s.golden.push_back(entry("cdt best response from " + start, "cdt", Theory::Cdt, std::nullopt,
                             BestResponseExpectation{initial, 10, TraceStatus::CycleDetected, 2, 3},
                             "each city's best response is the other"));
  }
  return s;
}

DilemmaSuite build_cosmic(const Params& params) {
  const auto& r = params.at("ray_prob");
  const auto& d = params.at("disposition_prior");
  const Strings acts{"take1", "take100"};
  DilemmaModel m = ModelBuilder("cosmic_ray")
                       .prior("Disposition", acts, {one_minus(d), d})
                       .prior("Ray", {"no_ray", "ray"}, {one_minus(r), r})
                       .function("Act", acts, {"Disposition", "Ray"},
                                 [](const Row& row) -> std::string {
                                   const bool flipped = row[1] == "ray";
                                   const bool hundred = (row[0] == "take100") != flipped;
                                   return hundred ? "take100" : "take1";
                                 })
                       .utility("V", {"Act", "Ray"},
                                [](const Row& row) {
                                  return Rational(row[0] == "take100" ? 100 : 1) -
                                         Rational(row[1] == "ray" ? 1000 : 0);
                                })
                       .build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "Disposition"}}, std::nullopt});
  DilemmaSuite s;
  s.models.emplace("edt", m.with_name("cosmic_ray/edt"));
  s.models.emplace("cdt", m.with_name("cosmic_ray/cdt"));
  s.models.emplace("fdt", m.with_name("cosmic_ray/fdt"));

  const Rational ray_given_100 = one_minus(d) * r / (one_minus(d) * r + d * one_minus(r));
  const Rational ray_given_1 = d * r / (d * r + one_minus(d) * one_minus(r));
  s.golden.push_back(entry("edt", "edt", Theory::Edt, std::nullopt,
                           table({{"take1", Rational(1) - Rational(1000) * ray_given_1},
                                  {"take100", Rational(100) - Rational(1000) * ray_given_100}}),
                           "EU = payoff - 1000*P(ray | act)"));
  s.golden.push_back(entry("cdt", "cdt", Theory::Cdt, std::nullopt,
                           table({{"take1", Rational(1) - Rational(1000) * r},
                                  {"take100", Rational(100) - Rational(1000) * r}}),
                           "the ray is independent of the intervened act"));
  s.golden.push_back(entry("fdt", "fdt", Theory::Fdt, std::nullopt,
                           table({{"take1", Rational(1) - Rational(901) * r},
                                  {"take100", Rational(100) - Rational(1099) * r}}),
                           "the ray flips the chosen act and costs 1000"));
  return s;
}

struct Registered {
  std::string name;
  std::string title;
  std::function<std::vector<ParamSpec>()> specs;
  std::function<DilemmaSuite(const Params&)> build;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> entries = [] {
    std::vector<Registered> r;
    r.push_back({"newcomb", "Newcomb's problem",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("accuracy", Rational(99, 100), false, false, "predictor accuracy"),
                       act_prior_param("onebox")};
                 },
                 build_newcomb});
    r.push_back({"twin_pd", "Twin prisoner's dilemma",
                 [] { return std::vector<ParamSpec>{act_prior_param("cooperate")}; }, build_twin});
    r.push_back({"smoking_lesion", "Smoking lesion",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("p", Rational(1, 2), true, true, "prior probability of the lesion"),
                       unit_param("q", Rational(0), false, false, "P(the other decision function smokes)")};
                 },
                 build_lesion});
    r.push_back({"transparent_newcomb", "Transparent Newcomb problem",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("accuracy", Rational(99, 100), true, true, "predictor accuracy"),
                       unit_param("q", Rational(1), false, false, "P(twobox | box seen empty)"),
                       act_prior_param("onebox")};
                 },
                 build_transparent});
    r.push_back({"parfit_hitchhiker", "Parfit's hitchhiker",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("accuracy", Rational(99, 100), true, true, "driver's lie-detection accuracy"),
                       act_prior_param("pay")};
                 },
                 build_parfit});
    r.push_back({"xor_blackmail", "XOR blackmail",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("termite_prior", Rational(1, 2), true, true, "prior probability of termites"),
                       unit_param("payer_prior", Rational(1, 2), true, false, "prior probability of paying")};
                 },
                 build_xor});
    r.push_back({"mechanical_blackmail", "Mechanical blackmail",
                 [] {
                   return std::vector<ParamSpec>{
                       unit_param("error", Rational(0), false, false, "P(blackmail | agent refuses)"),
                       unit_param("payer_prior", Rational(1, 2), true, true, "prior probability of paying")};
                 },
                 build_mechanical});
    r.push_back({"death_in_damascus", "Death in Damascus",
                 [] {
                   ParamSpec cost{"flee_cost", Rational(1000), Rational(0), kMillion, false, true, false,
                                  "cost of fleeing to Aleppo"};
                   ParamSpec price{"coin_price", Rational(1), Rational(0), std::nullopt, false, false, false,
                                   "price of the random coin"};
                   ParamSpec flag{"include_coin", Rational(0), Rational(0), Rational(1), false, false, true,
                                  "offer the random coin (0 or 1)"};
                   return std::vector<ParamSpec>{cost, price, flag, act_prior_param("damascus")};
                 },
                 build_damascus});
    r.push_back({"cosmic_ray", "Cosmic ray",
                 [] {
                   auto ray = unit_param("ray_prob", Rational(1, 1000000), false, true, "probability of a flipping ray");
                   ray.hi = Rational(1, 2);
                   return std::vector<ParamSpec>{
                       ray, unit_param("disposition_prior", Rational(1, 1000000000), true, true,
                                       "prior probability of the take100 disposition")};
                 },
                 build_cosmic});
    return r;
  }();
  return entries;
}

const Registered& lookup(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::UnknownDilemma, "no dilemma named '" + std::string(name) + "'");
}

}  // namespace

bool ParamSpec::admits(const Rational& value) const {
  if (flag) return value == Rational(0) || value == Rational(1);
  if (lo_open ? value <= lo : value < lo) return false;
  if (hi && (hi_open ? value >= *hi : value > *hi)) return false;
  return true;
}

std::string ParamSpec::range() const {
  if (flag) return "{0, 1}";
  std::string out = lo_open ? "(" : "[";
  out += lo.str() + ", ";
  out += hi ? hi->str() : "inf";
  out += (hi && !hi_open) ? "]" : ")";
  return out;
}

const DilemmaModel& DilemmaSuite::model(std::string_view key) const {
  auto it = models.find(std::string(key));
  if (it == models.end()) {
    throw Error(ErrorCode::UnknownName, "suite '" + name + "' has no model '" + std::string(key) + "'");
  }
  return it->second;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

std::vector<ParamSpec> param_specs(std::string_view name) { return lookup(name).specs(); }

DilemmaSuite load(std::string_view name, const Params& overrides) {
  const auto& reg = lookup(name);
  const auto specs = reg.specs();
  Params params;
  for (const auto& s : specs) params[s.name] = s.default_value;
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == key; });
    if (it == specs.end()) {
      throw Error(ErrorCode::UnknownParameter, "dilemma '" + reg.name + "' has no parameter '" + key + "'");
    }
    if (!it->admits(value)) {
      throw Error(ErrorCode::ParamOutOfRange,
                  "parameter '" + key + "' = " + value.str() + " is outside " + it->range());
    }
    params[key] = value;
  }
  auto suite = reg.build(params);
  suite.name = reg.name;
  suite.title = reg.title;
  suite.specs = specs;
  suite.params = std::move(params);
  return suite;
}

DilemmaSuite newcomb(const Rational& accuracy, const Rational& act_prior) {
  return load("newcomb", {{"accuracy", accuracy}, {"act_prior", act_prior}});
}
DilemmaSuite twin_pd(const Rational& act_prior) { return load("twin_pd", {{"act_prior", act_prior}}); }
DilemmaSuite smoking_lesion(const Rational& p, const Rational& q) {
  return load("smoking_lesion", {{"p", p}, {"q", q}});
}
DilemmaSuite transparent_newcomb(const Rational& accuracy, const Rational& q, const Rational& act_prior) {
  return load("transparent_newcomb", {{"accuracy", accuracy}, {"q", q}, {"act_prior", act_prior}});
}
DilemmaSuite parfit_hitchhiker(const Rational& accuracy, const Rational& act_prior) {
  return load("parfit_hitchhiker", {{"accuracy", accuracy}, {"act_prior", act_prior}});
}
DilemmaSuite xor_blackmail(const Rational& termite_prior, const Rational& payer_prior) {
  return load("xor_blackmail", {{"termite_prior", termite_prior}, {"payer_prior", payer_prior}});
}
DilemmaSuite mechanical_blackmail(const Rational& error, const Rational& payer_prior) {
  return load("mechanical_blackmail", {{"error", error}, {"payer_prior", payer_prior}});
}
DilemmaSuite death_in_damascus(const Rational& flee_cost, const Rational& coin_price, bool include_coin,
                               const Rational& act_prior) {
  return load("death_in_damascus", {{"flee_cost", flee_cost},
                                    {"coin_price", coin_price},
                                    {"include_coin", Rational(include_coin ? 1 : 0)},
                                    {"act_prior", act_prior}});
}
DilemmaSuite cosmic_ray(const Rational& ray_prob, const Rational& disposition_prior) {
  return load("cosmic_ray", {{"ray_prob", ray_prob}, {"disposition_prior", disposition_prior}});
}

RenameMap smoking_lesion_renaming() { return lesion_map(); }

}  // namespace dtheory
