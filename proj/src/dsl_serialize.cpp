#include <algorithm>
#include <sstream>

#include "dtheory/dsl.hpp"

namespace dtheory {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\', out += c;
    else if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else out += c;
  }
  return out + "\"";
}

std::string list(const std::vector<std::string>& items, const char* open, const char* close) {
  std::string out = open;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + close;
}

std::string row_text(const std::vector<std::size_t>& parents, const DilemmaModel& m, const std::vector<std::uint32_t>& idx) {
  std::vector<std::string> vals;
  for (std::size_t k = 0; k < parents.size(); ++k) vals.push_back(m.var(parents[k]).domain[idx[k]]);
  return list(vals, "(", ")");
}

std::vector<std::string> parent_names(const DilemmaModel& m, const CompiledVar& v) {
  std::vector<std::string> out;
  for (auto p : v.parents) out.push_back(m.var(p).name);
  return out;
}

// Parent value indices of every row, mixed-radix with the first parent most significant.
std::vector<std::vector<std::uint32_t>> row_indices(const DilemmaModel& m, const CompiledVar& v) {
  std::vector<std::vector<std::uint32_t>> out(v.rows, std::vector<std::uint32_t>(v.parents.size()));
  for (std::size_t r = 0; r < v.rows; ++r) {
    for (std::size_t k = 0; k < v.parents.size(); ++k) {
      const auto radix = m.var(v.parents[k]).domain.size();
      out[r][k] = static_cast<std::uint32_t>((r / v.strides[k]) % radix);
    }
  }
  return out;
}

}  // namespace

std::string serialize(const DilemmaModel& model) {
  std::ostringstream out;
  out << "dilemma " << quoted(model.name()) << "\n";

  std::vector<std::size_t> order(model.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return model.var(a).name < model.var(b).name; });

  for (auto i : order) {
    const auto& v = model.var(i);
    const auto rows = row_indices(model, v);
    const auto parents = parent_names(model, v);
    out << "\n";
    switch (v.kind) {
      case VarKind::Stochastic: {
        out << "var " << v.name << " in " << list(v.domain, "{", "}") << "\n";
        auto dist = [&](std::size_t r) {
          std::vector<std::string> entries;
          for (std::size_t k = 0; k < v.domain.size(); ++k) entries.push_back(v.domain[k] + ": " + v.cpt[r][k].str());
          return list(entries, "{", "}");
        };
        if (v.parents.empty()) {
          out << "  prior " << dist(0) << "\n";
        } else {
          out << "  cpt " << list(parents, "(", ")") << " {\n";
          for (std::size_t r = 0; r < v.rows; ++r) {
            out << "    " << row_text(v.parents, model, rows[r]) << ": " << dist(r) << ";\n";
          }
          out << "  }\n";
        }
        break;
      }
      case VarKind::Deterministic:
        out << "var " << v.name << " in " << list(v.domain, "{", "}") << "\n";
        out << "det " << v.name << list(parents, "(", ")") << " {\n";
        for (std::size_t r = 0; r < v.rows; ++r) {
          out << "  " << row_text(v.parents, model, rows[r]) << " -> " << v.domain[v.table[r]] << ";\n";
        }
        out << "}\n";
        break;
      case VarKind::Utility:
        out << "utility " << v.name << list(parents, "(", ")") << " {\n";
        for (std::size_t r = 0; r < v.rows; ++r) {
          out << "  " << row_text(v.parents, model, rows[r]) << " -> " << v.utility[r].str() << ";\n";
        }
        out << "}\n";
        break;
    }
  }

  const auto& d = model.designations();
  out << "\ndesignate act=" << d.act;
  if (d.obs) out << " obs=" << *d.obs;
  out << " value=" << d.value;
  std::vector<std::string> fdt;
  if (auto it = d.fdt.find(std::string(kNoObservation)); it != d.fdt.end()) {
    fdt.push_back(std::string(kNoObservation) + ": " + it->second);
  }
  if (auto obs = model.obs_index()) {
    for (const auto& o : model.var(*obs).domain) {
      if (auto it = d.fdt.find(o); it != d.fdt.end()) fdt.push_back(o + ": " + it->second);
    }
  }
  out << " fdt " << list(fdt, "{", "}");
  if (d.self) out << " self=" << *d.self;
  out << "\n";
  return out.str();
}

}  // namespace dtheory
