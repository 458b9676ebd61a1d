#pragma once

// Reference evaluator for tests. Works on variable names and the raw
// declaration/node tables, enumerating the full Cartesian product of all
// domains. Deliberately slow and shares no code with the engine's
// compiled inference.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dtheory/model.hpp"
#include "dtheory/theories.hpp"

namespace oracle {

using World = std::map<std::string, std::string>;

struct Net {
  std::vector<dtheory::VariableDecl> decls;
  std::map<std::string, dtheory::Node> nodes;
  dtheory::Designations desig;

  const dtheory::VariableDecl& decl(const std::string& name) const {
    for (const auto& d : decls) {
      if (d.name == name) return d;
    }
    throw std::out_of_range("oracle: no variable " + name);
  }
};

inline Net make_net(const std::vector<dtheory::VariableDecl>& decls, const std::vector<dtheory::Node>& nodes,
                    const dtheory::Designations& desig) {
  Net n{decls, {}, desig};
  for (const auto& node : nodes) n.nodes.emplace(dtheory::node_variable(node), node);
  return n;
}

inline Net make_net(const dtheory::DilemmaModel& m) { return make_net(m.declarations(), m.nodes(), m.designations()); }

inline dtheory::Row parent_row(const std::vector<std::string>& parents, const World& w) {
  dtheory::Row r;
  for (const auto& p : parents) r.push_back(w.at(p));
  return r;
}

inline mpq_class weight(const Net& net, const World& w) {
  mpq_class p = 1;
  for (const auto& d : net.decls) {
    if (d.kind == dtheory::VarKind::Utility) continue;
    const auto& node = net.nodes.at(d.name);
    if (auto* s = std::get_if<dtheory::StochasticNode>(&node)) {
      const auto& dist = s->cpt.at(parent_row(s->parents, w));
      auto it = dist.find(w.at(d.name));
      p *= it == dist.end() ? mpq_class(0) : it->second.raw();
    } else if (auto* f = std::get_if<dtheory::DeterministicNode>(&node)) {
      if (f->table.at(parent_row(f->parents, w)) != w.at(d.name)) return 0;
    }
    if (p == 0) return 0;
  }
  return p;
}

inline mpq_class utility(const Net& net, const World& w) {
  const auto& u = std::get<dtheory::UtilityNode>(net.nodes.at(net.desig.value));
  return u.table.at(parent_row(u.parents, w)).raw();
}

/// Every assignment of the non-utility variables with its (unnormalized) weight.
inline std::vector<std::pair<World, mpq_class>> joint(const Net& net) {
  std::vector<const dtheory::VariableDecl*> vars;
  for (const auto& d : net.decls) {
    if (d.kind != dtheory::VarKind::Utility) vars.push_back(&d);
  }
  std::vector<std::pair<World, mpq_class>> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    World w;
    for (std::size_t i = 0; i < vars.size(); ++i) w[vars[i]->name] = vars[i]->domain[idx[i]];
    out.emplace_back(w, weight(net, w));
    std::size_t k = 0;
    while (k < vars.size() && ++idx[k] == vars[k]->domain.size()) idx[k++] = 0;
    if (k == vars.size()) break;
  }
  return out;
}

inline bool matches(const World& w, const World& evidence) {
  for (const auto& [k, v] : evidence) {
    if (w.at(k) != v) return false;
  }
  return true;
}

inline mpq_class mass(const Net& net, const World& evidence) {
  mpq_class total = 0;
  for (const auto& [w, p] : joint(net)) {
    if (matches(w, evidence)) total += p;
  }
  return total;
}

/// E[V | evidence], or nothing when the evidence has probability zero.
inline std::optional<mpq_class> conditional_eu(const Net& net, const World& evidence) {
  mpq_class total = 0;
  mpq_class weighted = 0;
  for (const auto& [w, p] : joint(net)) {
    if (p == 0 || !matches(w, evidence)) continue;
    total += p;
    weighted += p * utility(net, w);
  }
  if (total == 0) return std::nullopt;
  mpq_class eu = weighted / total;
  eu.canonicalize();
  return eu;
}

/// P(var = value | evidence) for each value of `var`.
inline std::map<std::string, mpq_class> conditional_marginal(const Net& net, const std::string& var,
                                                             const World& evidence) {
  std::map<std::string, mpq_class> out;
  mpq_class total = 0;
  for (const auto& [w, p] : joint(net)) {
    if (!matches(w, evidence)) continue;
    out[w.at(var)] += p;
    total += p;
  }
  for (auto& [k, v] : out) {
    v /= total;
    v.canonicalize();
  }
  return out;
}

/// Replaces `target` by a parentless constant; the declared kind becomes deterministic.
inline Net intervene(Net net, const std::string& target, const std::string& value) {
  for (auto& d : net.decls) {
    if (d.name == target) d.kind = dtheory::VarKind::Deterministic;
  }
  dtheory::DeterministicNode c{target, {}, {}};
  c.table[dtheory::Row{}] = value;
  net.nodes[target] = c;
  return net;
}

inline std::string fdt_node(const Net& net, const std::optional<std::string>& obs) {
  if (obs) return net.desig.fdt.at(*obs);
  if (net.desig.self) return *net.desig.self;
  return net.desig.fdt.at(std::string(dtheory::kNoObservation));
}

/// Per-action EU in act-domain order; nothing for excluded actions.
inline std::vector<std::pair<std::string, std::optional<mpq_class>>> theory_table(
    const Net& net, dtheory::Theory theory, const std::optional<std::string>& obs) {
  std::vector<std::pair<std::string, std::optional<mpq_class>>> out;
  const auto& act = net.desig.act;
  World obs_ev;
  if (obs) obs_ev[*net.desig.obs] = *obs;
  for (const auto& a : net.decl(act).domain) {
    std::optional<mpq_class> eu;
    switch (theory) {
      case dtheory::Theory::Edt: {
        auto ev = obs_ev;
        ev[act] = a;
        eu = conditional_eu(net, ev);
        break;
      }
      case dtheory::Theory::Cdt:
        eu = conditional_eu(intervene(net, act, a), obs_ev);
        break;
      case dtheory::Theory::Fdt:
        eu = conditional_eu(intervene(net, fdt_node(net, obs), a), {});
        break;
    }
    out.emplace_back(a, eu);
  }
  return out;
}

inline std::vector<std::string> argmax(const std::vector<std::pair<std::string, std::optional<mpq_class>>>& table) {
  std::optional<mpq_class> best;
  for (const auto& [a, eu] : table) {
    if (eu && (!best || *eu > *best)) best = eu;
  }
  std::vector<std::string> out;
  for (const auto& [a, eu] : table) {
    if (eu && *eu == *best) out.push_back(a);
  }
  return out;
}

/// Names reachable from `from` along child edges, excluding `from`.
inline std::set<std::string> descendants(const Net& net, const std::string& from) {
  std::set<std::string> out;
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    const auto cur = stack.back();
    stack.pop_back();
    for (const auto& [name, node] : net.nodes) {
      const auto& ps = dtheory::node_parents(node);
      if (std::find(ps.begin(), ps.end(), cur) != ps.end() && out.insert(name).second) stack.push_back(name);
    }
  }
  return out;
}

}  // namespace oracle
