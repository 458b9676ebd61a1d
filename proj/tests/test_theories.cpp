#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dtheory/corpus.hpp"
#include "dtheory/rename.hpp"
#include "dtheory/surgery.hpp"
#include "dtheory/theories.hpp"
#include "support/oracle.hpp"
#include "support/random_models.hpp"

using namespace dtheory;

namespace {

constexpr Theory kTheories[] = {Theory::Edt, Theory::Cdt, Theory::Fdt};

Rational from(const mpq_class& q) { return Rational(q); }

std::vector<std::optional<std::string>> observations(const DilemmaModel& m) {
  std::vector<std::optional<std::string>> out;
  if (auto o = m.obs_index()) {
    for (const auto& v : m.var(*o).domain) out.emplace_back(v);
  } else {
    out.emplace_back(std::nullopt);
  }
  return out;
}

// Compares one engine prescription against the oracle, or checks the engine
// throws where the oracle has no answer.
void check_against_oracle(const DilemmaModel& m, Theory t, const std::optional<std::string>& obs) {
  const auto net = oracle::make_net(m);
  CAPTURE(to_string(t));
  CAPTURE(obs.value_or("-"));
  if (t == Theory::Fdt) {
    const auto& fdt = m.designations().fdt;
    const bool has = obs ? fdt.count(*obs) : (m.designations().self || fdt.count(std::string(kNoObservation)));
    if (!has) {
      CHECK_THROWS_WITH_AS(evaluate(m, t, obs), doctest::Contains("MissingFdtNode"), Error);
      return;
    }
  }
  const auto want = oracle::theory_table(net, t, obs);
  const bool any = std::any_of(want.begin(), want.end(), [](const auto& x) { return x.second.has_value(); });
  const bool all = std::all_of(want.begin(), want.end(), [](const auto& x) { return x.second.has_value(); });
  if (t == Theory::Cdt && !all) {
    CHECK_THROWS_WITH_AS(evaluate(m, t, obs), doctest::Contains("ZeroProbabilityEvidence"), Error);
    return;
  }
  if (t == Theory::Edt && !any) {
    CHECK_THROWS_AS(evaluate(m, t, obs), Error);
    return;
  }
  const auto p = evaluate(m, t, obs);
  std::size_t k = 0;
  std::vector<std::string> excluded;
  for (const auto& [a, eu] : want) {
    if (!eu) {
      excluded.push_back(a);
      continue;
    }
    REQUIRE(k < p.per_action.size());
    CHECK(p.per_action[k].action == a);
    CHECK(p.per_action[k].eu == from(*eu));
    ++k;
  }
  CHECK(k == p.per_action.size());
  std::vector<std::string> got_excluded;
  for (const auto& e : p.excluded) got_excluded.push_back(e.action);
  CHECK(got_excluded == excluded);
  CHECK(p.chosen == oracle::argmax(want));
}

DilemmaModel scale_utility(const DilemmaModel& m, const Rational& alpha, const Rational& beta) {
  auto node = std::get<UtilityNode>(m.node(m.designations().value));
  for (auto& [row, v] : node.table) v = alpha * v + beta;
  return replace_node(m, node);
}

RenameMap random_renaming(std::mt19937_64& rng, const DilemmaModel& m) {
  RenameMap map;
  std::vector<std::string> vars;
  for (const auto& v : m.vars()) vars.push_back(v.name);
  auto targets = vars;
  std::shuffle(targets.begin(), targets.end(), rng);
  for (std::size_t i = 0; i < vars.size(); ++i) map.variables[vars[i]] = "R" + targets[i];
  std::set<std::string> labels;
  for (const auto& v : m.vars()) labels.insert(v.domain.begin(), v.domain.end());
  std::vector<std::string> from(labels.begin(), labels.end());
  auto to = from;
  std::shuffle(to.begin(), to.end(), rng);
  for (std::size_t i = 0; i < from.size(); ++i) map.values[from[i]] = "x_" + to[i];
  return map;
}

std::string mapped(const RenameMap& map, const std::string& value) {
  auto it = map.values.find(value);
  return it == map.values.end() ? value : it->second;
}

}  // namespace

TEST_CASE("theory names") {
  CHECK(to_string(Theory::Edt) == "edt");
  CHECK(parse_theory("cdt") == Theory::Cdt);
  CHECK(parse_theory("FDT") == std::nullopt);
  CHECK(parse_theory("x") == std::nullopt);
}

TEST_CASE("corpus models agree with the oracle for every theory and observation") {
  for (const auto& name : suite_names()) {
    const auto suite = load(name);
    for (const auto& [key, m] : suite.models) {
      CAPTURE(name);
      CAPTURE(key);
      for (auto t : kTheories) {
        for (const auto& obs : observations(m)) check_against_oracle(m, t, obs);
      }
    }
  }
}

TEST_CASE("property: random models agree with the oracle") {
  std::mt19937_64 rng(314159);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_model(rng).build();
    for (auto t : kTheories) {
      for (const auto& obs : observations(m)) check_against_oracle(m, t, obs);
    }
  }
}

TEST_CASE("errors") {
  const auto nc = newcomb();
  CHECK_THROWS_WITH_AS(edt(nc.model("edt"), "full"), doctest::Contains("UnknownObservation"), Error);
  const auto tn = transparent_newcomb();
  CHECK_THROWS_WITH_AS(cdt(tn.model("cdt"), "half"), doctest::Contains("UnknownObservation"), Error);
  CHECK_THROWS_WITH_AS(fdt(nc.model("edt")), doctest::Contains("MissingFdtNode"), Error);
  CHECK_THROWS_WITH_AS(hypothetical(nc.model("edt"), Theory::Cdt, "threebox"), doctest::Contains("ValueOutOfDomain"),
                       Error);

  // Act fixed by a point-mass prior: the other action is excluded.
  const auto pinned = with_act_prior(nc.model("edt"), point_mass(nc.model("edt"), "twobox"));
  const auto p = edt(pinned);
  CHECK(p.chosen == std::vector<std::string>{"twobox"});
  REQUIRE(p.excluded.size() == 1);
  CHECK(p.excluded[0].action == "onebox");
  CHECK(p.excluded[0].reason == "P(onebox) = 0");

  const auto mb = mechanical_blackmail(Rational(0));
  const auto q = edt(mb.model("edt"), "blackmail");
  CHECK(q.chosen == std::vector<std::string>{"pay"});
  REQUIRE(q.excluded.size() == 1);
  CHECK(q.excluded[0].reason == "P(refuse | blackmail) = 0");

  const auto sure = ModelBuilder("sure")
                        .prior("Act", {"a", "b"}, {Rational(1, 2), Rational(1, 2)})
                        .prior("Obs", {"seen", "unseen"}, {Rational(1), Rational(0)})
                        .utility("V", {"Act"}, [](const Row& r) { return Rational(r[0] == "a" ? 1 : 2); })
                        .build({"Act", "Obs", "V", {{"seen", "Act"}}, std::nullopt});
  CHECK_THROWS_WITH_AS(edt(sure, "unseen"), doctest::Contains("ZeroProbabilityEvidence"), Error);
  CHECK_THROWS_WITH_AS(cdt(sure, "unseen"), doctest::Contains("ZeroProbabilityEvidence"), Error);
  CHECK_THROWS_WITH_AS(fdt(sure, "unseen"), doctest::Contains("MissingFdtNode"), Error);
  CHECK(fdt(sure, "seen").chosen == std::vector<std::string>{"b"});
}

TEST_CASE("ties are reported in domain order") {
  const auto m = ModelBuilder("flat")
                     .prior("Act", {"c", "a", "b"}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)})
                     .utility("V", {"Act"}, [](const Row& r) { return Rational(r[0] == "b" ? 0 : 5); })
                     .build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "Act"}}, std::nullopt});
  for (auto t : kTheories) CHECK(evaluate(m, t).chosen == std::vector<std::string>{"c", "a"});
}

TEST_CASE("fdt target selection") {
  const auto tn = transparent_newcomb().model("fdt");
  CHECK(fdt_target(tn, std::string("full")) == "fdt_full");
  CHECK(fdt_target(tn, std::string("empty")) == "fdt_empty");
  const auto sl = smoking_lesion().model("fdt");
  CHECK(fdt_target(sl, std::nullopt) == *sl.designations().self);
}

TEST_CASE("property: FDT ignores the observation beyond the choice of node") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 200; ++i) {
    const auto g = gen::random_model(rng);
    if (!g.desig.obs || g.desig.fdt.size() < 2) continue;
    const auto m = g.build();
    for (const auto& [o1, n1] : g.desig.fdt) {
      for (const auto& [o2, n2] : g.desig.fdt) {
        if (o1 >= o2) continue;
        const auto p1 = fdt(m, o1);
        const auto p2 = fdt(m, o2);
        if (n1 == n2) {
          CHECK(p1.per_action.size() == p2.per_action.size());
          for (std::size_t k = 0; k < p1.per_action.size(); ++k) CHECK(p1.per_action[k].eu == p2.per_action[k].eu);
        }
        // Removing the observation designation entirely changes nothing.
        auto d = g.desig;
        d.obs.reset();
        d.fdt = {{std::string(kNoObservation), n1}};
        const auto bare = build_model(g.decls, g.nodes, d);
        const auto pb = fdt(bare);
        for (std::size_t k = 0; k < pb.per_action.size(); ++k) CHECK(pb.per_action[k].eu == p1.per_action[k].eu);
        ++checked;
      }
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("dominance on the corpus") {
  const auto nc = newcomb();
  CHECK(dominance(nc.model("cdt"), Theory::Cdt, "twobox", "onebox") == DominanceResult::Dominates);
  CHECK(dominance(nc.model("cdt"), Theory::Cdt, "onebox", "twobox") == DominanceResult::Dominated);
  CHECK(dominance(nc.model("fdt"), Theory::Fdt, "onebox", "twobox") == DominanceResult::Dominates);
  CHECK(dominance(nc.model("cdt"), Theory::Cdt, "onebox", "onebox") == DominanceResult::Neither);
  CHECK(dominance(twin_pd().model("cdt"), Theory::Cdt, "defect", "cooperate") == DominanceResult::Dominates);
  CHECK(to_string(DominanceResult::Dominated) == "dominated");
  // Death in Damascus: neither act is better in every world of Death's prediction.
  CHECK(dominance(death_in_damascus().model("cdt"), Theory::Cdt, "damascus", "aleppo") == DominanceResult::Neither);
}

TEST_CASE("property: a CDT-dominant action is CDT-chosen") {
  std::mt19937_64 rng(21);
  int checked = 0;
  int dominant = 0;
  for (int i = 0; i < 3000 && checked < 250; ++i) {
    gen::Options opt;
    opt.allow_obs = false;
    opt.max_domain = 2;
    const auto m = gen::random_model(rng, opt).build();
    if (m.actions().size() != 2) continue;
    const auto& a = m.actions()[0];
    const auto& b = m.actions()[1];
    DominanceResult r;
    try {
      r = dominance(m, Theory::Cdt, a, b);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IncomparableHypotheticals);
      continue;
    }
    ++checked;
    const auto chosen = cdt(m).chosen;
    auto has = [&](const std::string& x) { return std::find(chosen.begin(), chosen.end(), x) != chosen.end(); };
    if (r == DominanceResult::Dominates) {
      ++dominant;
      CHECK(has(a));
    }
    if (r == DominanceResult::Dominated) {
      ++dominant;
      CHECK(has(b));
    }
  }
  CHECK(checked >= 200);
  CHECK(dominant > 20);
}

TEST_CASE("agreement condition") {
  CHECK_FALSE(agreement_condition(newcomb().model("fdt")));
  CHECK_FALSE(agreement_condition(newcomb().model("edt")));
  CHECK_FALSE(agreement_condition(transparent_newcomb().model("fdt")));
  const auto chain = ModelBuilder("chain")
                         .prior("fdt", {"x", "y"}, {Rational(1, 2), Rational(1, 2)})
                         .function("Act", {"x", "y"}, {"fdt"}, [](const Row& r) { return r[0]; })
                         .function("Outcome", {"good", "bad"}, {"Act"},
                                   [](const Row& r) -> std::string { return r[0] == "x" ? "good" : "bad"; })
                         .utility("V", {"Outcome"}, [](const Row& r) { return Rational(r[0] == "good" ? 1 : 0); })
                         .build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "fdt"}}, std::nullopt});
  CHECK(agreement_condition(chain));
  // The corpus ray flips the act, so Act has a second parent.
  CHECK_FALSE(agreement_condition(cosmic_ray().model("fdt")));
  const auto ray = ModelBuilder("exogenous_ray")
                       .prior("Disposition", {"take1", "take100"}, {Rational(1) - Rational(1, 1000000000), Rational(1, 1000000000)})
                       .prior("Ray", {"no_ray", "ray"}, {Rational(999999, 1000000), Rational(1, 1000000)})
                       .function("Act", {"take1", "take100"}, {"Disposition"}, [](const Row& r) { return r[0]; })
                       .utility("V", {"Act", "Ray"},
                                [](const Row& r) {
                                  return Rational(r[0] == "take100" ? 100 : 1) - Rational(r[1] == "ray" ? 1000 : 0);
                                })
                       .build({"Act", std::nullopt, "V", {{std::string(kNoObservation), "Disposition"}}, std::nullopt});
  CHECK(agreement_condition(ray));
  for (auto t : kTheories) CHECK(evaluate(ray, t).chosen == std::vector<std::string>{"take100"});
}

TEST_CASE("property: agreement theorem") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 300; ++i) {
    const auto m = gen::random_agreement_model(rng).build();
    REQUIRE(agreement_condition(m));
    const auto e = edt(m);
    const auto c = cdt(m);
    const auto f = fdt(m);
    CHECK(e.chosen == c.chosen);
    CHECK(c.chosen == f.chosen);
    CHECK(e.excluded.empty());
  }
}

TEST_CASE("property: rename invariance") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 250; ++i) {
    const auto m = gen::random_model(rng).build();
    const auto map = random_renaming(rng, m);
    const auto r = rename(m, map);
    CHECK(structurally_equal(rename(r, invert(map)), m));
    for (auto t : kTheories) {
      for (const auto& obs : observations(m)) {
        std::optional<std::string> robs;
        if (obs) robs = mapped(map, *obs);
        std::optional<Prescription> p;
        try {
          p = evaluate(m, t, obs);
        } catch (const Error& e) {
          CHECK_THROWS_AS(evaluate(r, t, robs), Error);
          continue;
        }
        const auto q = evaluate(r, t, robs);
        REQUIRE(p->per_action.size() == q.per_action.size());
        for (std::size_t k = 0; k < q.per_action.size(); ++k) {
          CHECK(q.per_action[k].action == mapped(map, p->per_action[k].action));
          CHECK(q.per_action[k].eu == p->per_action[k].eu);
        }
        std::vector<std::string> chosen;
        for (const auto& a : p->chosen) chosen.push_back(mapped(map, a));
        CHECK(q.chosen == chosen);
      }
    }
  }
}

TEST_CASE("property: positive affine utility transforms keep every chosen set") {
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 250; ++i) {
    const auto m = gen::random_model(rng).build();
    const Rational alpha(static_cast<long>(gen::uniform(rng, 1, 50)), static_cast<long>(gen::uniform(rng, 1, 7)));
    const Rational beta(static_cast<long>(gen::uniform(rng, 0, 2000)) - 1000, static_cast<long>(gen::uniform(rng, 1, 3)));
    const auto s = scale_utility(m, alpha, beta);
    for (auto t : kTheories) {
      for (const auto& obs : observations(m)) {
        std::optional<Prescription> p;
        try {
          p = evaluate(m, t, obs);
        } catch (const Error&) {
          CHECK_THROWS_AS(evaluate(s, t, obs), Error);
          continue;
        }
        const auto q = evaluate(s, t, obs);
        CHECK(q.chosen == p->chosen);
        for (std::size_t k = 0; k < q.per_action.size(); ++k) {
          CHECK(q.per_action[k].eu == alpha * p->per_action[k].eu + beta);
        }
      }
    }
  }
}

TEST_CASE("EDT follows a point-mass act prior regardless of payoffs") {
  for (const auto& name : {"newcomb", "twin_pd", "smoking_lesion", "death_in_damascus"}) {
    const auto suite = load(name);
    const auto& m = suite.model("edt");
    for (const auto& a : m.actions()) {
      CAPTURE(name);
      CAPTURE(a);
      const auto p = edt(with_act_prior(m, point_mass(m, a)));
      CHECK(p.chosen == std::vector<std::string>{a});
    }
  }
}

TEST_CASE("CDT margin in Newcomb does not depend on the act prior") {
  std::optional<Rational> margin;
  for (long k = 0; k <= 10; ++k) {
    const auto m = with_act_prior(newcomb().model("cdt"), {{"onebox", Rational(k, 10)}, {"twobox", Rational(10 - k, 10)}});
    const auto p = cdt(m);
    const auto gap = *p.eu("twobox") - *p.eu("onebox");
    if (margin) CHECK(gap == *margin);
    margin = gap;
  }
  CHECK(*margin == Rational(1000));
}

TEST_CASE("act priors") {
  const auto m = newcomb().model("cdt");
  const auto prior = act_marginal(m);
  CHECK(prior.at("onebox") == Rational(1, 2));
  const auto shifted = with_act_prior(m, {{"onebox", Rational(1, 5)}, {"twobox", Rational(4, 5)}});
  CHECK(act_marginal(shifted).at("twobox") == Rational(4, 5));
  CHECK_THROWS_WITH_AS(with_act_prior(m, {{"onebox", Rational(1, 5)}}), doctest::Contains("InvalidPrior"), Error);
  CHECK_THROWS_WITH_AS(with_act_prior(m, {{"threebox", Rational(1)}}), doctest::Contains("InvalidPrior"), Error);
  CHECK_THROWS_WITH_AS(with_act_prior(m, {{"onebox", Rational(2)}, {"twobox", Rational(-1)}}),
                       doctest::Contains("InvalidPrior"), Error);
  CHECK_THROWS_WITH_AS(point_mass(m, "threebox"), doctest::Contains("InvalidPrior"), Error);
  const auto noisy = ModelBuilder("noisy")
                         .prior("Mood", {"m0", "m1"}, {Rational(1, 2), Rational(1, 2)})
                         .cpt("Act", {"a", "b"}, {"Mood"},
                              [](const Row&) { return std::vector<Rational>{Rational(1, 3), Rational(2, 3)}; })
                         .utility("V", {"Act"}, [](const Row&) { return Rational(0); })
                         .build({"Act", std::nullopt, "V", {}, std::nullopt});
  CHECK_THROWS_WITH_AS(with_act_prior(noisy, point_mass(noisy, "a")), doctest::Contains("NoActPriorNode"), Error);
}

TEST_CASE("best response dynamics") {
  const auto dd = death_in_damascus().model("cdt");
  for (const auto& start : dd.actions()) {
    const auto trace = cdt_best_response(dd, point_mass(dd, start), 10);
    CHECK(trace.status == TraceStatus::CycleDetected);
    CHECK(trace.period == 2);
    CHECK(trace.steps.size() <= 3);
    for (const auto& step : trace.steps) {
      // Each step is CDT's own output under that step's prior.
      const auto p = cdt(with_act_prior(dd, step.prior));
      CHECK(p.chosen == step.prescription.chosen);
      CHECK(step.action == p.chosen.front());
      CHECK(step.action != std::max_element(step.prior.begin(), step.prior.end(), [](auto& x, auto& y) {
                             return x.second < y.second;
                           })->first);
    }
  }
  const auto nc = newcomb().model("cdt");
  const auto t = cdt_best_response(nc, act_marginal(nc), 5);
  CHECK(t.status == TraceStatus::Converged);
  CHECK(t.steps.size() == 2);
  CHECK(t.steps.back().action == "twobox");
  const auto t0 = cdt_best_response(nc, point_mass(nc, "twobox"), 5);
  CHECK(t0.status == TraceStatus::Converged);
  CHECK(t0.steps.size() == 1);
  const auto none = cdt_best_response(nc, act_marginal(nc), 0);
  CHECK(none.status == TraceStatus::BudgetExhausted);
  CHECK(none.steps.empty());
  CHECK(cdt_best_response(dd, point_mass(dd, "damascus"), 1).status == TraceStatus::BudgetExhausted);
  CHECK(to_string(TraceStatus::CycleDetected) == "cycle-detected");

  const auto inert = ModelBuilder("inert")
                         .prior("Act", {"a", "b"}, {Rational(1, 2), Rational(1, 2)})
                         .utility("V", {}, [](const Row&) { return Rational(7); })
                         .build({"Act", std::nullopt, "V", {}, std::nullopt});
  const auto ti = cdt_best_response(inert, point_mass(inert, "a"), 5);
  CHECK(ti.status == TraceStatus::Converged);
  CHECK(ti.steps.size() == 1);
  CHECK(ti.steps[0].prescription.chosen == std::vector<std::string>{"a", "b"});
}

TEST_CASE("ratification") {
  const auto dd = death_in_damascus().model("cdt");
  const auto r = cdt_ratify(dd);
  CHECK(r.at("damascus") == Rational(5005, 10000));
  CHECK(r.at("aleppo") == Rational(4995, 10000));
  const auto at = cdt(with_act_prior(dd, r));
  CHECK(at.eu("damascus") == at.eu("aleppo"));

  const auto sym = death_in_damascus(Rational(0)).model("cdt");
  const auto rs = cdt_ratify(sym);
  CHECK(rs.at("damascus") == Rational(1, 2));

  const auto nc = newcomb().model("cdt");
  CHECK(cdt_ratify(nc) == point_mass(nc, "twobox"));

  const auto coin = death_in_damascus(Rational(1000), Rational(1), true).model("cdt");
  CHECK_THROWS_WITH_AS(cdt_ratify(coin), doctest::Contains("NoRatifiableState"), Error);
  const auto rc = cdt_ratify(coin, std::make_pair(std::string("damascus"), std::string("aleppo")));
  CHECK(rc.at("damascus") == Rational(5005, 10000));
  CHECK(rc.at("coin") == Rational(0));
  const auto pc = cdt(with_act_prior(coin, rc));
  CHECK(std::find(pc.chosen.begin(), pc.chosen.end(), "coin") == pc.chosen.end());
  CHECK_THROWS_WITH_AS(cdt_ratify(coin, std::make_pair(std::string("coin"), std::string("coin"))),
                       doctest::Contains("NoRatifiableState"), Error);
}
