#include <algorithm>
#include <sstream>

#include "dtheory/corpus.hpp"

namespace dtheory {

namespace {

std::string show(const Rational& r) { return r.str() + " (" + format_dollars(r) + ")"; }

std::string join(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

std::string show_prior(const ActionPrior& prior) {
  std::vector<std::string> parts;
  for (const auto& [a, p] : prior) parts.push_back(a + ": " + p.str());
  return join(parts);
}

std::string summarize(const Prescription& p) {
  std::vector<std::string> parts;
  for (const auto& av : p.per_action) parts.push_back(av.action + " " + av.eu.str());
  for (const auto& ex : p.excluded) parts.push_back(ex.action + " excluded");
  return join(parts) + " -> " + join(p.chosen);
}

void check(const PrescriptionExpectation& e, const Prescription& p, GoldenCheck& out) {
  out.computed = summarize(p);
  if (!e.per_action.empty()) {
    for (const auto& want : e.per_action) {
      auto got = p.eu(want.action);
      if (!got) {
        out.diffs.push_back("per_action[" + want.action + "]: expected " + show(want.eu) + ", computed excluded");
      } else if (*got != want.eu) {
        out.diffs.push_back("per_action[" + want.action + "]: expected " + show(want.eu) + ", computed " + show(*got));
      }
    }
    for (const auto& got : p.per_action) {
      const bool listed = std::any_of(e.per_action.begin(), e.per_action.end(),
                                      [&](const ActionValue& w) { return w.action == got.action; });
      if (!listed) {
        out.diffs.push_back("per_action[" + got.action + "]: expected excluded, computed " + show(got.eu));
      }
    }
  }
  if (e.chosen != p.chosen) {
    out.diffs.push_back("chosen: expected " + join(e.chosen) + ", computed " + join(p.chosen));
  }
  if (e.margin) {
    const auto better = p.eu(e.margin->better);
    const auto worse = p.eu(e.margin->worse);
    if (!better || !worse) {
      out.diffs.push_back("margin: an action is excluded");
    } else if (*better - *worse != e.margin->amount) {
      out.diffs.push_back("margin(" + e.margin->better + " - " + e.margin->worse + "): expected " +
                          show(e.margin->amount) + ", computed " + show(*better - *worse));
    }
  }
}

void check(const RatificationExpectation& e, const DilemmaModel& model, GoldenCheck& out) {
  const auto prior = cdt_ratify(model, e.support);
  out.computed = show_prior(prior);
  for (const auto& [a, want] : e.prior) {
    auto it = prior.find(a);
    const Rational got = it == prior.end() ? Rational(0) : it->second;
    if (got != want) out.diffs.push_back("prior[" + a + "]: expected " + want.str() + ", computed " + got.str());
  }
  if (e.chosen_at_prior) {
    const auto chosen = cdt(with_act_prior(model, prior)).chosen;
    if (chosen != *e.chosen_at_prior) {
      out.diffs.push_back("chosen at prior: expected " + join(*e.chosen_at_prior) + ", computed " + join(chosen));
    }
  }
}

void check(const BestResponseExpectation& e, const DilemmaModel& model, GoldenCheck& out) {
  const auto trace = cdt_best_response(model, e.initial, e.budget);
  std::ostringstream s;
  s << to_string(trace.status) << " after " << trace.steps.size() << " steps";
  if (trace.status == TraceStatus::CycleDetected) s << ", period " << trace.period;
  out.computed = s.str();
  if (trace.status != e.status) {
    out.diffs.push_back("status: expected " + std::string(to_string(e.status)) + ", computed " +
                        std::string(to_string(trace.status)));
  }
  if (e.status == TraceStatus::CycleDetected && trace.period != e.period) {
    out.diffs.push_back("period: expected " + std::to_string(e.period) + ", computed " + std::to_string(trace.period));
  }
  if (trace.steps.size() > e.max_steps) {
    out.diffs.push_back("steps: expected at most " + std::to_string(e.max_steps) + ", computed " +
                        std::to_string(trace.steps.size()));
  }
}

void check(const DominanceExpectation& e, const DilemmaModel& model, const GoldenEntry& g, GoldenCheck& out) {
  const auto result = dominance(model, g.theory, e.a, e.b, g.observation);
  out.computed = e.a + " " + std::string(to_string(result)) + " " + e.b;
  if (result != e.result) {
    out.diffs.push_back("dominance(" + e.a + ", " + e.b + "): expected " + std::string(to_string(e.result)) +
                        ", computed " + std::string(to_string(result)));
  }
}

GoldenCheck run(const DilemmaSuite& suite, const GoldenEntry& g) {
  GoldenCheck out;
  out.label = g.label;
  try {
    auto model = suite.model(g.model);
    if (g.act_prior) model = with_act_prior(model, *g.act_prior);
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, PrescriptionExpectation>) {
            check(e, evaluate(model, g.theory, g.observation), out);
          } else if constexpr (std::is_same_v<T, DominanceExpectation>) {
            check(e, model, g, out);
          } else {
            check(e, model, out);
          }
        },
        g.expect);
  } catch (const Error& err) {
    out.computed = "error";
    out.diffs.push_back(std::string("error: ") + err.what());
  }
  out.pass = out.diffs.empty();
  return out;
}

}  // namespace

bool GoldenReport::pass() const { return failures() == 0; }

std::size_t GoldenReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
}

GoldenReport verify_golden(const DilemmaSuite& suite) {
  GoldenReport report;
  report.suite = suite.name;
  for (const auto& g : suite.golden) report.checks.push_back(run(suite, g));
  return report;
}

}  // namespace dtheory
