#include "dtheory/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "dtheory/dsl.hpp"

namespace dtheory::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Exit {
  int code;
};

[[noreturn]] void usage_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n";
  throw Exit{kUsage};
}

std::pair<std::string, std::string> split_pair(std::ostream& err, const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) usage_error(err, std::string("expected ") + what + ", got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

Rational parse_number(std::ostream& err, const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) usage_error(err, "'" + text + "' is not an exact number");
  return *r;
}

Params parse_params(std::ostream& err, const std::vector<std::string>& items) {
  Params out;
  for (const auto& item : items) {
    auto [k, v] = split_pair(err, item, "key=value");
    out[k] = parse_number(err, v);
  }
  return out;
}

std::string read_file(std::ostream& err, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error(err, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

DilemmaModel parse_file(std::ostream& err, const std::string& path) {
  const auto text = read_file(err, path);
  auto result = parse(text);
  if (!result.ok()) {
    for (const auto& e : result.errors) err << format_error(e, path) << "\n";
    throw Exit{kInvalidModel};
  }
  return *result.model;
}

bool looks_like_path(const std::string& arg) {
  return arg.find('/') != std::string::npos || (arg.size() > 4 && arg.substr(arg.size() - 4) == ".dlm");
}

// A corpus suite or a single model read from a file.
struct Source {
  std::string name;
  std::optional<DilemmaSuite> suite;
  std::optional<DilemmaModel> file;

  const DilemmaModel& model(const std::string& key) const { return suite ? suite->model(key) : *file; }
};

Source open_source(std::ostream& err, const std::string& arg, const Params& params) {
  Source s;
  if (looks_like_path(arg)) {
    if (!params.empty()) usage_error(err, "parameters apply only to built-in dilemmas");
    s.file = parse_file(err, arg);
    s.name = s.file->name().empty() ? arg : s.file->name();
  } else {
    s.suite = load(arg, params);
    s.name = s.suite->name;
  }
  return s;
}

std::string params_text(const Params& params) {
  std::string out;
  for (const auto& [k, v] : params) out += (out.empty() ? "" : ", ") + k + "=" + v.str();
  return out;
}

Json rational_json(const Rational& r) {
  bool exact = false;
  const auto dec = r.decimal(6, &exact);
  return Json{{"exact", r.str()}, {"decimal", dec}, {"decimal_is_exact", exact}, {"dollars", format_dollars(r)}};
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows, const std::string& indent) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()));
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line = indent;
    for (std::size_t c = 0; c < row.size(); ++c) line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 2);
    out << line << "\n";
  }
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

// ---- run ----

struct RunReport {
  Theory theory;
  std::string model;
  Prescription prescription;
  double elapsed_ms;
};

int cmd_run(const std::string& dilemma, const std::string& theory_arg, const std::optional<std::string>& obs,
            const std::vector<std::string>& param_items, Format format, std::ostream& out, std::ostream& err) {
  std::vector<Theory> theories;
  if (theory_arg == "all") {
    theories = {Theory::Edt, Theory::Cdt, Theory::Fdt};
  } else if (auto t = parse_theory(theory_arg)) {
    theories = {*t};
  } else {
    usage_error(err, "unknown theory '" + theory_arg + "' (expected edt, cdt, fdt or all)");
  }
  const auto params = parse_params(err, param_items);
  const auto src = open_source(err, dilemma, params);

  std::vector<RunReport> reports;
  for (auto t : theories) {
    const auto& m = src.model(std::string(to_string(t)));
    const auto start = std::chrono::steady_clock::now();
    auto p = evaluate(m, t, obs);
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    reports.push_back({t, m.name(), std::move(p), elapsed.count()});
  }

  const Params& used = src.suite ? src.suite->params : params;
  if (format == Format::Json) {
    Json j;
    j["dilemma"] = src.name;
    j["params"] = Json::object();
    for (const auto& [k, v] : used) j["params"][k] = v.str();
    j["observation"] = obs ? Json(*obs) : Json(nullptr);
    j["reports"] = Json::array();
    for (const auto& r : reports) {
      Json rep;
      rep["theory"] = std::string(to_string(r.theory));
      rep["model"] = r.model;
      rep["per_action"] = Json::array();
      for (const auto& av : r.prescription.per_action) {
        rep["per_action"].push_back({{"action", av.action}, {"eu", rational_json(av.eu)}});
      }
      rep["chosen"] = r.prescription.chosen;
      rep["excluded"] = Json::array();
      for (const auto& ex : r.prescription.excluded) {
        rep["excluded"].push_back({{"action", ex.action}, {"reason", ex.reason}});
      }
      rep["elapsed_ms"] = r.elapsed_ms;
      j["reports"].push_back(std::move(rep));
    }
    out << j.dump(2) << "\n";
    return kOk;
  }

  out << src.name;
  if (!used.empty()) out << " (" << params_text(used) << ")";
  if (obs) out << " observing " << *obs;
  out << "\n";
  for (const auto& r : reports) {
    out << "\n" << to_string(r.theory) << "  [model " << r.model << "]\n";
    std::vector<std::vector<std::string>> rows{{"action", "EU", "dollars"}};
    for (const auto& av : r.prescription.per_action) {
      rows.push_back({av.action, av.eu.str(), format_dollars(av.eu)});
    }
    print_table(out, rows, "  ");
    for (const auto& ex : r.prescription.excluded) out << "  excluded " << ex.action << ": " << ex.reason << "\n";
    out << "  chosen: " << join(r.prescription.chosen) << "\n";
    out << "  time: " << std::fixed << std::setprecision(3) << r.elapsed_ms << " ms\n";
    out.unsetf(std::ios::fixed);
  }
  return kOk;
}

// ---- golden ----

int cmd_golden(const std::vector<std::string>& names, const std::vector<std::string>& param_items,
               const std::vector<std::string>& overrides, Format format, std::ostream& out, std::ostream& err) {
  const auto params = parse_params(err, param_items);
  const auto selected = names.empty() ? suite_names() : names;
  if (!params.empty() && selected.size() != 1) usage_error(err, "--param needs exactly one dilemma");
  if (!overrides.empty() && selected.size() != 1) usage_error(err, "--override needs exactly one dilemma");
  std::vector<DilemmaSuite> suites;
  for (const auto& n : selected) suites.push_back(load(n, params));
  for (const auto& o : overrides) {
    auto [key, path] = split_pair(err, o, "model=path");
    const auto model = parse_file(err, path);
    for (auto& s : suites) {
      auto it = s.models.find(key);
      if (it == s.models.end()) usage_error(err, "dilemma '" + s.name + "' has no model '" + key + "'");
      it->second = model;
    }
  }
  return golden(suites, format, out);
}

// ---- trace ----

int cmd_trace(const std::string& dilemma, const std::optional<std::string>& start,
              const std::vector<std::string>& prior_items, std::size_t budget,
              const std::vector<std::string>& param_items, Format format, std::ostream& out, std::ostream& err) {
  const auto params = parse_params(err, param_items);
  const auto src = open_source(err, dilemma, params);
  const auto& model = src.model("cdt");
  if (start && !prior_items.empty()) usage_error(err, "use either --start or --prior");
  ActionPrior initial;
  if (start) {
    initial = point_mass(model, *start);
  } else if (!prior_items.empty()) {
    for (const auto& item : prior_items) {
      auto [a, p] = split_pair(err, item, "action=probability");
      initial[a] = parse_number(err, p);
    }
  } else {
    initial = act_marginal(model);
  }
  const auto trace = cdt_best_response(model, initial, budget);

  auto prior_text = [](const ActionPrior& p) {
    std::vector<std::string> parts;
    for (const auto& [a, v] : p) parts.push_back(a + "=" + v.str());
    return "{" + join(parts) + "}";
  };
  if (format == Format::Json) {
    Json j;
    j["dilemma"] = src.name;
    j["model"] = model.name();
    j["budget"] = budget;
    auto prior_json = [](const ActionPrior& p) {
      Json o = Json::object();
      for (const auto& [a, v] : p) o[a] = v.str();
      return o;
    };
    j["initial"] = prior_json(trace.initial);
    j["steps"] = Json::array();
    for (const auto& s : trace.steps) {
      Json step{{"prior", prior_json(s.prior)}, {"per_action", Json::array()}, {"best_response", s.action}};
      for (const auto& av : s.prescription.per_action) {
        step["per_action"].push_back({{"action", av.action}, {"eu", rational_json(av.eu)}});
      }
      j["steps"].push_back(std::move(step));
    }
    j["status"] = std::string(to_string(trace.status));
    j["period"] = trace.status == TraceStatus::CycleDetected ? Json(trace.period) : Json(nullptr);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << src.name << " CDT best response  [model " << model.name() << ", budget " << budget << "]\n";
  out << "initial prior " << prior_text(trace.initial) << "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out << "\nstep " << (i + 1) << "  prior " << prior_text(s.prior) << "\n";
    std::vector<std::vector<std::string>> rows{{"action", "EU", "dollars"}};
    for (const auto& av : s.prescription.per_action) rows.push_back({av.action, av.eu.str(), format_dollars(av.eu)});
    print_table(out, rows, "  ");
    out << "  best response: " << s.action << "\n";
  }
  out << "\nstatus: " << to_string(trace.status);
  if (trace.status == TraceStatus::CycleDetected) out << " (period " << trace.period << ")";
  out << "\n";
  return kOk;
}

// ---- fmt ----

int cmd_fmt(const std::string& path, std::ostream& out, std::ostream& err) {
  out << serialize(parse_file(err, path));
  return kOk;
}

Format parse_format(std::ostream& err, const std::string& text) {
  if (text == "table") return Format::Table;
  if (text == "json") return Format::Json;
  usage_error(err, "unknown format '" + text + "' (expected table or json)");
}

}  // namespace

int exit_code(const Error& error) {
  switch (error.code()) {
    case ErrorCode::UnknownDilemma:
    case ErrorCode::UnknownParameter:
    case ErrorCode::ParamOutOfRange:
    case ErrorCode::UnknownName:
    case ErrorCode::InvalidPrior:
      return kUsage;
    case ErrorCode::InvalidModel:
    case ErrorCode::NonBijectiveMapping:
      return kInvalidModel;
    default:
      return kTheoryError;
  }
}

int golden(const std::vector<DilemmaSuite>& suites, Format format, std::ostream& out) {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::vector<GoldenReport> reports;
  for (const auto& s : suites) {
    reports.push_back(verify_golden(s));
    total += reports.back().checks.size();
    failed += reports.back().failures();
  }
  if (format == Format::Json) {
    Json j;
    j["suites"] = Json::array();
    for (std::size_t i = 0; i < suites.size(); ++i) {
      Json s{{"name", reports[i].suite}, {"params", Json::object()}, {"checks", Json::array()}};
      for (const auto& [k, v] : suites[i].params) s["params"][k] = v.str();
      for (const auto& c : reports[i].checks) {
        s["checks"].push_back({{"label", c.label}, {"pass", c.pass}, {"computed", c.computed}, {"diffs", c.diffs}});
      }
      j["suites"].push_back(std::move(s));
    }
    j["total"] = total;
    j["failed"] = failed;
    out << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < suites.size(); ++i) {
      out << reports[i].suite;
      if (!suites[i].params.empty()) out << " (" << params_text(suites[i].params) << ")";
      out << "\n";
      for (const auto& c : reports[i].checks) {
        out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.label << ": " << c.computed << "\n";
        for (const auto& d : c.diffs) out << "        " << d << "\n";
      }
    }
    out << total << " checks, " << failed << " failed\n";
  }
  return failed == 0 ? kOk : kGoldenMismatch;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact EDT/CDT/FDT evaluation of decision dilemmas", "dtheory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string format_text = "table";
  std::vector<std::string> params;

  auto* run = app.add_subcommand("run", "Evaluate a dilemma under one or all theories");
  std::string run_dilemma;
  std::string theory = "all";
  std::optional<std::string> obs;
  run->add_option("dilemma", run_dilemma, "Built-in dilemma name or .dlm file")->required();
  run->add_option("-t,--theory", theory, "edt, cdt, fdt or all")->capture_default_str();
  run->add_option("-o,--obs", obs, "Observed value");
  run->add_option("-p,--param", params, "Parameter override key=value (repeatable)");
  run->add_option("-f,--format", format_text, "table or json")->capture_default_str();

  auto* gold = app.add_subcommand("golden", "Verify the golden expectations of the corpus");
  std::vector<std::string> golden_names;
  std::vector<std::string> overrides;
  gold->add_option("dilemmas", golden_names, "Restrict to these dilemmas");
  gold->add_option("-p,--param", params, "Parameter override key=value (one dilemma only)");
  gold->add_option("--override", overrides, "Replace a suite model: key=path.dlm (one dilemma only)");
  gold->add_option("-f,--format", format_text, "table or json")->capture_default_str();

  auto* trace = app.add_subcommand("trace", "Iterate the CDT best-response dynamics");
  std::string trace_dilemma;
  std::optional<std::string> start;
  std::vector<std::string> prior;
  std::size_t budget = 10;
  trace->add_option("dilemma", trace_dilemma, "Built-in dilemma name or .dlm file")->required();
  trace->add_option("-s,--start", start, "Start from a point mass on this action");
  trace->add_option("--prior", prior, "Initial action probability action=value (repeatable)");
  trace->add_option("-b,--budget", budget, "Maximum number of updates")->capture_default_str();
  trace->add_option("-p,--param", params, "Parameter override key=value (repeatable)");
  trace->add_option("-f,--format", format_text, "table or json")->capture_default_str();

  auto* fmt = app.add_subcommand("fmt", "Print the canonical form of a .dlm file");
  std::string fmt_path;
  fmt->add_option("file", fmt_path, "Path to a .dlm file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    const auto format = parse_format(err, format_text);
    if (run->parsed()) return cmd_run(run_dilemma, theory, obs, params, format, out, err);
    if (gold->parsed()) return cmd_golden(golden_names, params, overrides, format, out, err);
    if (trace->parsed()) return cmd_trace(trace_dilemma, start, prior, budget, params, format, out, err);
    return cmd_fmt(fmt_path, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
}

}  // namespace dtheory::cli
