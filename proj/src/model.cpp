#include "dtheory/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace dtheory {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Stochastic: return "stochastic";
    case VarKind::Deterministic: return "deterministic";
    case VarKind::Utility: return "utility";
  }
  return "?";
}

const std::string& node_variable(const Node& node) {
  return std::visit([](const auto& n) -> const std::string& { return n.variable; }, node);
}

const std::vector<std::string>& node_parents(const Node& node) {
  return std::visit([](const auto& n) -> const std::vector<std::string>& { return n.parents; }, node);
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<Row> product_rows(const std::vector<std::vector<std::string>>& domains) {
  std::vector<Row> rows{Row{}};
  for (const auto& domain : domains) {
    std::vector<Row> next;
    next.reserve(rows.size() * domain.size());
    for (const auto& prefix : rows) {
      for (const auto& v : domain) {
        Row r = prefix;
        r.push_back(v);
        next.push_back(std::move(r));
      }
    }
    rows = std::move(next);
  }
  return rows;
}

std::optional<std::uint32_t> CompiledVar::value_index(std::string_view value) const {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == value) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

struct DilemmaModel::Impl {
  std::string name;
  std::vector<CompiledVar> vars;
  std::map<std::string, std::size_t, std::less<>> by_name;
  std::vector<std::size_t> topo;
  Designations desig;
  std::size_t act = 0;
  std::optional<std::size_t> obs;
  std::size_t value = 0;
  std::vector<std::vector<bool>> ancestors;  // ancestors[v][u]: u is a proper ancestor of v
};

const std::string& DilemmaModel::name() const { return impl_->name; }

DilemmaModel DilemmaModel::with_name(std::string name) const {
  auto copy = std::make_shared<Impl>(*impl_);
  copy->name = std::move(name);
  return DilemmaModel(std::move(copy));
}

std::size_t DilemmaModel::size() const { return impl_->vars.size(); }
const CompiledVar& DilemmaModel::var(std::size_t index) const { return impl_->vars.at(index); }
const std::vector<CompiledVar>& DilemmaModel::vars() const { return impl_->vars; }

std::optional<std::size_t> DilemmaModel::find(std::string_view name) const {
  auto it = impl_->by_name.find(name);
  if (it == impl_->by_name.end()) return std::nullopt;
  return it->second;
}

std::size_t DilemmaModel::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownVariable, "no variable named '" + std::string(name) + "'");
}

const std::vector<std::size_t>& DilemmaModel::topological_order() const { return impl_->topo; }
const Designations& DilemmaModel::designations() const { return impl_->desig; }
std::size_t DilemmaModel::act_index() const { return impl_->act; }
std::optional<std::size_t> DilemmaModel::obs_index() const { return impl_->obs; }
std::size_t DilemmaModel::value_index() const { return impl_->value; }
const std::vector<std::string>& DilemmaModel::actions() const { return impl_->vars[impl_->act].domain; }

bool DilemmaModel::is_ancestor(std::size_t ancestor, std::size_t of) const {
  return impl_->ancestors.at(of).at(ancestor);
}

std::vector<std::string> DilemmaModel::fdt_missing_observations() const {
  std::vector<std::string> missing;
  const auto& fdt = impl_->desig.fdt;
  if (!impl_->obs) {
    if (!fdt.count(std::string(kNoObservation)) && !impl_->desig.self) missing.emplace_back(kNoObservation);
    return missing;
  }
  for (const auto& v : impl_->vars[*impl_->obs].domain) {
    if (!fdt.count(v)) missing.push_back(v);
  }
  return missing;
}

std::vector<VariableDecl> DilemmaModel::declarations() const {
  std::vector<VariableDecl> out;
  out.reserve(size());
  for (const auto& v : impl_->vars) out.push_back({v.name, v.domain, v.kind});
  return out;
}

Node DilemmaModel::node(std::string_view variable) const {
  const auto& v = var(index(variable));
  std::vector<std::string> parents;
  std::vector<std::vector<std::string>> domains;
  for (auto p : v.parents) {
    parents.push_back(impl_->vars[p].name);
    domains.push_back(impl_->vars[p].domain);
  }
  const auto rows = product_rows(domains);
  switch (v.kind) {
    case VarKind::Stochastic: {
      StochasticNode n{v.name, parents, {}};
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto& dist = n.cpt[rows[r]];
        for (std::size_t k = 0; k < v.domain.size(); ++k) dist[v.domain[k]] = v.cpt[r][k];
      }
      return n;
    }
    case VarKind::Deterministic: {
      DeterministicNode n{v.name, parents, {}};
      for (std::size_t r = 0; r < rows.size(); ++r) n.table[rows[r]] = v.domain[v.table[r]];
      return n;
    }
    case VarKind::Utility: {
      UtilityNode n{v.name, parents, {}};
      for (std::size_t r = 0; r < rows.size(); ++r) n.table[rows[r]] = v.utility[r];
      return n;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Node> DilemmaModel::nodes() const {
  std::vector<Node> out;
  out.reserve(size());
  for (const auto& v : impl_->vars) out.push_back(node(v.name));
  return out;
}

namespace {

struct Checker {
  const std::vector<VariableDecl>& decls;
  const std::vector<Node>& nodes;
  const Designations& desig;
  std::vector<Violation> out;
  std::map<std::string, const VariableDecl*> decl_by_name;
  std::map<std::string, const Node*> node_by_name;

  void add(ViolationKind kind, std::string message, std::string variable = {},
           std::optional<Row> row = std::nullopt, std::string related = {}) {
    out.push_back({kind, std::move(message), std::move(variable), std::move(row), std::move(related)});
  }

  void check_decls() {
    std::size_t utilities = 0;
    for (const auto& d : decls) {
      if (!is_identifier(d.name)) add(ViolationKind::BadName, "invalid variable name '" + d.name + "'", d.name);
      if (!decl_by_name.emplace(d.name, &d).second) {
        add(ViolationKind::DuplicateVariable, "variable '" + d.name + "' declared twice", d.name);
      }
      if (d.kind == VarKind::Utility) {
        ++utilities;
        if (!d.domain.empty()) {
          add(ViolationKind::KindMismatch, "utility variable '" + d.name + "' cannot declare a domain", d.name);
        }
        continue;
      }
      if (d.domain.empty()) add(ViolationKind::EmptyDomain, "variable '" + d.name + "' has an empty domain", d.name);
      std::set<std::string> seen;
      for (const auto& v : d.domain) {
        if (!is_identifier(v)) {
          add(ViolationKind::BadName, "invalid value '" + v + "' in domain of '" + d.name + "'", d.name);
        }
        if (!seen.insert(v).second) {
          add(ViolationKind::DuplicateValue, "value '" + v + "' repeated in domain of '" + d.name + "'", d.name);
        }
      }
    }
    if (utilities != 1) {
      add(ViolationKind::UtilityCount,
          "expected exactly one utility variable, found " + std::to_string(utilities));
    }
  }

  static VarKind kind_of(const Node& n) {
    switch (n.index()) {
      case 0: return VarKind::Stochastic;
      case 1: return VarKind::Deterministic;
      default: return VarKind::Utility;
    }
  }

  void check_nodes() {
    for (const auto& n : nodes) {
      const auto& name = node_variable(n);
      auto d = decl_by_name.find(name);
      if (d == decl_by_name.end()) {
        add(ViolationKind::UndeclaredNode, "node for undeclared variable '" + name + "'", name);
        continue;
      }
      if (!node_by_name.emplace(name, &n).second) {
        add(ViolationKind::DuplicateNode, "variable '" + name + "' has more than one node", name);
        continue;
      }
      if (kind_of(n) != d->second->kind) {
        add(ViolationKind::KindMismatch,
            "variable '" + name + "' is declared " + std::string(to_string(d->second->kind)) + " but its node is " +
                std::string(to_string(kind_of(n))),
            name);
      }
    }
    for (const auto& [name, d] : decl_by_name) {
      if (!node_by_name.count(name)) add(ViolationKind::MissingNode, "variable '" + name + "' has no node", name);
    }
  }

  // Returns false when parent lists are unusable for table checks.
  bool check_parents() {
    bool ok = true;
    for (const auto& [name, n] : node_by_name) {
      std::set<std::string> seen;
      for (const auto& p : node_parents(*n)) {
        auto d = decl_by_name.find(p);
        if (d == decl_by_name.end()) {
          add(ViolationKind::DanglingParent, "'" + name + "' lists unknown parent '" + p + "'", name, std::nullopt, p);
          ok = false;
        } else if (d->second->kind == VarKind::Utility) {
          add(ViolationKind::UtilityParent, "utility variable '" + p + "' cannot be a parent of '" + name + "'", name, std::nullopt, p);
          ok = false;
        }
        if (!seen.insert(p).second) {
          add(ViolationKind::DuplicateParent, "'" + name + "' lists parent '" + p + "' twice", name, std::nullopt, p);
          ok = false;
        }
      }
    }
    return ok;
  }

  bool check_acyclic() {
    // Iterative DFS with colors; reports the first cycle found.
    std::map<std::string, int> color;
    std::vector<std::string> stack;
    std::function<bool(const std::string&)> visit = [&](const std::string& v) -> bool {
      color[v] = 1;
      stack.push_back(v);
      auto it = node_by_name.find(v);
      if (it != node_by_name.end()) {
        for (const auto& p : node_parents(*it->second)) {
          if (!node_by_name.count(p)) continue;
          if (color[p] == 1) {
            auto start = std::find(stack.begin(), stack.end(), p);
            std::string path;
            for (auto s = start; s != stack.end(); ++s) path += *s + " <- ";
            path += p;
            add(ViolationKind::CycleDetected, "cycle through parents: " + path, p);
            return false;
          }
          if (color[p] == 0 && !visit(p)) return false;
        }
      }
      stack.pop_back();
      color[v] = 2;
      return true;
    };
    for (const auto& [name, n] : node_by_name) {
      (void)n;
      if (color[name] == 0 && !visit(name)) return false;
    }
    return true;
  }

  std::vector<Row> rows_of(const Node& n) const {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : node_parents(n)) domains.push_back(decl_by_name.at(p)->domain);
    return product_rows(domains);
  }

  template <typename Map>
  void check_rows(const std::string& name, const Map& table, const std::vector<Row>& rows) {
    std::set<Row> expected(rows.begin(), rows.end());
    for (const auto& r : rows) {
      if (!table.count(r)) add(ViolationKind::IncompleteCPT, "'" + name + "' has no row for " + format_row(r), name, r);
    }
    for (const auto& [r, unused] : table) {
      (void)unused;
      if (!expected.count(r)) {
        add(ViolationKind::UnexpectedRow, "'" + name + "' has a row " + format_row(r) + " outside its parents' domains",
            name, r);
      }
    }
  }

  void check_tables() {
    for (const auto& [name, n] : node_by_name) {
      const auto* d = decl_by_name.at(name);
      const auto rows = rows_of(*n);
      if (const auto* s = std::get_if<StochasticNode>(n)) {
        check_rows(name, s->cpt, rows);
        for (const auto& [r, dist] : s->cpt) {
          Rational sum;
          for (const auto& [v, p] : dist) {
            if (std::find(d->domain.begin(), d->domain.end(), v) == d->domain.end()) {
              add(ViolationKind::ValueOutOfDomain,
                  "'" + name + "' row " + format_row(r) + " assigns probability to unknown value '" + v + "'", name, r);
            }
            if (p < Rational(0) || p > Rational(1)) {
              add(ViolationKind::BadProbability,
                  "'" + name + "' row " + format_row(r) + " has probability " + p.str() + " for '" + v + "'", name, r);
            }
            sum += p;
          }
          if (sum != Rational(1)) {
            add(ViolationKind::NonNormalizedRow,
                "'" + name + "' row " + format_row(r) + " sums to " + sum.str() + ", not 1", name, r);
          }
        }
      } else if (const auto* t = std::get_if<DeterministicNode>(n)) {
        check_rows(name, t->table, rows);
        for (const auto& [r, v] : t->table) {
          if (std::find(d->domain.begin(), d->domain.end(), v) == d->domain.end()) {
            add(ViolationKind::ValueOutOfDomain,
                "'" + name + "' row " + format_row(r) + " maps to unknown value '" + v + "'", name, r);
          }
        }
      } else {
        check_rows(name, std::get<UtilityNode>(*n).table, rows);
      }
    }
  }

  const VariableDecl* designated(const std::string& role, const std::string& name) {
    auto d = decl_by_name.find(name);
    if (d == decl_by_name.end()) {
      add(ViolationKind::BadDesignation, role + " designation names unknown variable '" + name + "'", name);
      return nullptr;
    }
    return d->second;
  }

  void check_designations() {
    const auto* act = designated("act", desig.act);
    if (act && act->kind == VarKind::Utility) {
      add(ViolationKind::BadDesignation, "act designation '" + desig.act + "' is the utility variable", desig.act);
      act = nullptr;
    }
    if (const auto* value = designated("value", desig.value); value && value->kind != VarKind::Utility) {
      add(ViolationKind::BadDesignation, "value designation '" + desig.value + "' is not the utility variable",
          desig.value);
    }
    const VariableDecl* obs = nullptr;
    if (desig.obs) {
      obs = designated("obs", *desig.obs);
      if (obs && obs->kind == VarKind::Utility) {
        add(ViolationKind::BadDesignation, "obs designation '" + *desig.obs + "' is the utility variable", *desig.obs);
        obs = nullptr;
      } else if (obs && *desig.obs == desig.act) {
        add(ViolationKind::BadDesignation, "obs and act designate the same variable '" + desig.act + "'", desig.act);
      }
    }
    auto check_action_node = [&](const std::string& role, const std::string& name) {
      const auto* d = designated(role, name);
      if (!d || !act) return;
      if (d->kind == VarKind::Utility || d->domain != act->domain) {
        add(ViolationKind::BadDesignation,
            role + " node '" + name + "' must have the same domain as act node '" + desig.act + "'", name);
      }
    };
    for (const auto& [key, target] : desig.fdt) {
      const bool key_ok = key == kNoObservation ||
                          (obs && std::find(obs->domain.begin(), obs->domain.end(), key) != obs->domain.end());
      if (!key_ok) {
        add(ViolationKind::BadDesignation, "fdt key '" + key + "' is neither an observation value nor the marker",
            target);
      }
      check_action_node("fdt", target);
    }
    if (desig.self) check_action_node("self", *desig.self);
  }
};

CompiledVar compile_var(const VariableDecl& d, const Node& n, const std::map<std::string, std::size_t>& index,
                        const std::vector<VariableDecl>& sorted) {
  CompiledVar v;
  v.name = d.name;
  v.domain = d.domain;
  v.kind = d.kind;
  std::vector<std::vector<std::string>> domains;
  for (const auto& p : node_parents(n)) {
    v.parents.push_back(index.at(p));
    domains.push_back(sorted[index.at(p)].domain);
  }
  v.strides.assign(v.parents.size(), 1);
  for (std::size_t k = v.parents.size(); k-- > 0;) {
    v.strides[k] = v.rows;
    v.rows *= domains[k].size();
  }
  const auto rows = product_rows(domains);
  if (const auto* s = std::get_if<StochasticNode>(&n)) {
    v.cpt.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& dist = s->cpt.at(rows[r]);
      v.cpt[r].resize(v.domain.size());
      for (std::size_t k = 0; k < v.domain.size(); ++k) {
        auto it = dist.find(v.domain[k]);
        if (it != dist.end()) v.cpt[r][k] = it->second;
      }
    }
  } else if (const auto* t = std::get_if<DeterministicNode>(&n)) {
    for (const auto& r : rows) v.table.push_back(*v.value_index(t->table.at(r)));
  } else {
    const auto& u = std::get<UtilityNode>(n);
    for (const auto& r : rows) v.utility.push_back(u.table.at(r));
  }
  return v;
}

}  // namespace

std::vector<Violation> check_model(const std::vector<VariableDecl>& decls, const std::vector<Node>& nodes,
                                   const Designations& desig) {
  Checker c{decls, nodes, desig, {}, {}, {}};
  c.check_decls();
  c.check_nodes();
  const bool parents_ok = c.check_parents();
  if (parents_ok && c.check_acyclic()) c.check_tables();
  c.check_designations();
  return std::move(c.out);
}

DilemmaModel build_model(std::vector<VariableDecl> decls, std::vector<Node> nodes, Designations desig,
                         std::string name) {
  if (auto violations = check_model(decls, nodes, desig); !violations.empty()) {
    throw ModelError(std::move(violations));
  }
  std::sort(decls.begin(), decls.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < decls.size(); ++i) index[decls[i].name] = i;
  std::vector<const Node*> node_of(decls.size());
  for (const auto& n : nodes) node_of[index.at(node_variable(n))] = &n;

  auto impl = std::make_shared<DilemmaModel::Impl>();
  impl->name = std::move(name);
  for (std::size_t i = 0; i < decls.size(); ++i) {
    impl->vars.push_back(compile_var(decls[i], *node_of[i], index, decls));
    impl->by_name.emplace(decls[i].name, i);
  }
  const std::size_t n = impl->vars.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : impl->vars[i].parents) impl->vars[p].children.push_back(i);
  }

  // Kahn's algorithm, smallest index first.
  std::vector<std::size_t> indegree(n);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = impl->vars[i].parents.size();
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    const auto v = *ready.begin();
    ready.erase(ready.begin());
    impl->topo.push_back(v);
    for (auto c : impl->vars[v].children) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }

  impl->ancestors.assign(n, std::vector<bool>(n, false));
  for (auto v : impl->topo) {
    for (auto p : impl->vars[v].parents) {
      impl->ancestors[v][p] = true;
      for (std::size_t u = 0; u < n; ++u) {
        if (impl->ancestors[p][u]) impl->ancestors[v][u] = true;
      }
    }
  }

  impl->act = index.at(desig.act);
  impl->value = index.at(desig.value);
  if (desig.obs) impl->obs = index.at(*desig.obs);
  impl->desig = std::move(desig);
  return DilemmaModel(std::move(impl));
}

bool structurally_equal(const DilemmaModel& a, const DilemmaModel& b) {
  if (a.size() != b.size() || !(a.designations() == b.designations())) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.var(i);
    const auto& y = b.var(i);
    if (x.name != y.name || x.domain != y.domain || x.kind != y.kind || x.parents != y.parents ||
        x.cpt != y.cpt || x.table != y.table || x.utility != y.utility) {
      return false;
    }
  }
  return true;
}

DilemmaModel replace_node(const DilemmaModel& model, Node replacement) {
  auto decls = model.declarations();
  auto nodes = model.nodes();
  const auto& name = node_variable(replacement);
  const auto i = model.index(name);
  decls[i].kind = Checker::kind_of(replacement);
  nodes[i] = std::move(replacement);
  return build_model(std::move(decls), std::move(nodes), model.designations(), model.name());
}

const VariableDecl& ModelBuilder::decl(const std::string& name) const {
  for (const auto& d : decls_) {
    if (d.name == name) return d;
  }
  throw Error(ErrorCode::UnknownVariable, "builder: parent '" + name + "' not added yet");
}

std::vector<Row> ModelBuilder::rows_for(const std::vector<std::string>& parents) const {
  std::vector<std::vector<std::string>> domains;
  for (const auto& p : parents) domains.push_back(decl(p).domain);
  return product_rows(domains);
}

ModelBuilder& ModelBuilder::prior(const std::string& variable, std::vector<std::string> domain,
                                  const std::vector<Rational>& probabilities) {
  return cpt(variable, std::move(domain), {}, [&](const Row&) { return probabilities; });
}

ModelBuilder& ModelBuilder::cpt(const std::string& variable, std::vector<std::string> domain,
                                std::vector<std::string> parents,
                                const std::function<std::vector<Rational>(const Row&)>& row) {
  StochasticNode node{variable, parents, {}};
  for (const auto& r : rows_for(parents)) {
    const auto probs = row(r);
    auto& dist = node.cpt[r];
    for (std::size_t k = 0; k < domain.size() && k < probs.size(); ++k) dist[domain[k]] = probs[k];
  }
  decls_.push_back({variable, std::move(domain), VarKind::Stochastic});
  nodes_.emplace_back(std::move(node));
  return *this;
}

ModelBuilder& ModelBuilder::function(const std::string& variable, std::vector<std::string> domain,
                                     std::vector<std::string> parents,
                                     const std::function<std::string(const Row&)>& f) {
  DeterministicNode node{variable, parents, {}};
  for (const auto& r : rows_for(parents)) node.table[r] = f(r);
  decls_.push_back({variable, std::move(domain), VarKind::Deterministic});
  nodes_.emplace_back(std::move(node));
  return *this;
}

ModelBuilder& ModelBuilder::utility(const std::string& variable, std::vector<std::string> parents,
                                    const std::function<Rational(const Row&)>& u) {
  UtilityNode node{variable, parents, {}};
  for (const auto& r : rows_for(parents)) node.table[r] = u(r);
  decls_.push_back({variable, {}, VarKind::Utility});
  nodes_.emplace_back(std::move(node));
  return *this;
}

DilemmaModel ModelBuilder::build(Designations desig) const {
  return build_model(decls_, nodes_, std::move(desig), name_);
}

}  // namespace dtheory
