#include "dtheory/rename.hpp"

#include <set>

namespace dtheory {

namespace {

std::string mapped(const std::map<std::string, std::string>& m, const std::string& s) {
  auto it = m.find(s);
  return it == m.end() ? s : it->second;
}

void require_injective(const std::set<std::string>& universe, const std::map<std::string, std::string>& m,
                       const std::string& what) {
  std::map<std::string, std::string> image;
  for (const auto& s : universe) {
    const auto t = mapped(m, s);
    auto [it, inserted] = image.emplace(t, s);
    if (!inserted) {
      throw Error(ErrorCode::NonBijectiveMapping,
                  what + " '" + it->second + "' and '" + s + "' would both become '" + t + "'");
    }
  }
}

Row mapped_row(const std::map<std::string, std::string>& m, const Row& row) {
  Row out;
  out.reserve(row.size());
  for (const auto& v : row) out.push_back(mapped(m, v));
  return out;
}

}  // namespace

DilemmaModel rename(const DilemmaModel& model, const RenameMap& map) {
  std::set<std::string> names;
  std::set<std::string> labels;
  for (const auto& v : model.vars()) {
    names.insert(v.name);
    labels.insert(v.domain.begin(), v.domain.end());
  }
  for (const auto& [from, to] : map.variables) {
    (void)to;
    if (!names.count(from)) throw Error(ErrorCode::UnknownName, "no variable named '" + from + "'");
  }
  for (const auto& [from, to] : map.values) {
    (void)to;
    if (!labels.count(from)) throw Error(ErrorCode::UnknownName, "no value labelled '" + from + "'");
  }
  require_injective(names, map.variables, "variables");
  require_injective(labels, map.values, "values");

  const auto& vm = map.variables;
  const auto& lm = map.values;
  std::vector<VariableDecl> decls;
  for (auto d : model.declarations()) {
    d.name = mapped(vm, d.name);
    for (auto& v : d.domain) v = mapped(lm, v);
    decls.push_back(std::move(d));
  }

  std::vector<Node> nodes;
  for (const auto& n : model.nodes()) {
    nodes.push_back(std::visit(
        [&](const auto& src) -> Node {
          using T = std::decay_t<decltype(src)>;
          T dst;
          dst.variable = mapped(vm, src.variable);
          dst.parents = mapped_row(vm, src.parents);
          if constexpr (std::is_same_v<T, StochasticNode>) {
            for (const auto& [row, dist] : src.cpt) {
              auto& out = dst.cpt[mapped_row(lm, row)];
              for (const auto& [v, p] : dist) out[mapped(lm, v)] = p;
            }
          } else if constexpr (std::is_same_v<T, DeterministicNode>) {
            for (const auto& [row, v] : src.table) dst.table[mapped_row(lm, row)] = mapped(lm, v);
          } else {
            for (const auto& [row, u] : src.table) dst.table[mapped_row(lm, row)] = u;
          }
          return dst;
        },
        n));
  }

  const auto& src = model.designations();
  Designations desig;
  desig.act = mapped(vm, src.act);
  if (src.obs) desig.obs = mapped(vm, *src.obs);
  desig.value = mapped(vm, src.value);
  for (const auto& [key, target] : src.fdt) {
    desig.fdt[key == kNoObservation ? key : mapped(lm, key)] = mapped(vm, target);
  }
  if (src.self) desig.self = mapped(vm, *src.self);

  return build_model(std::move(decls), std::move(nodes), std::move(desig),
                     map.model_name ? *map.model_name : model.name());
}

RenameMap invert(const RenameMap& map) {
  RenameMap out;
  for (const auto& [a, b] : map.variables) out.variables[b] = a;
  for (const auto& [a, b] : map.values) out.values[b] = a;
  return out;
}

}  // namespace dtheory
