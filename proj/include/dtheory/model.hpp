#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dtheory/error.hpp"
#include "dtheory/rational.hpp"

namespace dtheory {

enum class VarKind { Stochastic, Deterministic, Utility };

std::string_view to_string(VarKind kind);

/// A declared variable. The utility variable has an empty domain: it ranges
/// over exact rationals.
struct VariableDecl {
  std::string name;
  std::vector<std::string> domain;
  VarKind kind = VarKind::Stochastic;
};

/// CPT rows are keyed by parent values in parent order. Values missing from a
/// row's distribution have probability 0.
struct StochasticNode {
  std::string variable;
  std::vector<std::string> parents;
  std::map<Row, std::map<std::string, Rational>> cpt;

  friend bool operator==(const StochasticNode&, const StochasticNode&) = default;
};

struct DeterministicNode {
  std::string variable;
  std::vector<std::string> parents;
  std::map<Row, std::string> table;

  friend bool operator==(const DeterministicNode&, const DeterministicNode&) = default;
};

struct UtilityNode {
  std::string variable;
  std::vector<std::string> parents;
  std::map<Row, Rational> table;

  friend bool operator==(const UtilityNode&, const UtilityNode&) = default;
};

using Node = std::variant<StochasticNode, DeterministicNode, UtilityNode>;

const std::string& node_variable(const Node& node);
const std::vector<std::string>& node_parents(const Node& node);

/// Reserved observation key for the no-observation case.
inline constexpr std::string_view kNoObservation = "\xE2\x88\x85";

struct Designations {
  std::string act;
  std::optional<std::string> obs;
  std::string value;
  std::map<std::string, std::string> fdt;  // observation value or kNoObservation -> node
  std::optional<std::string> self;

  friend bool operator==(const Designations&, const Designations&) = default;
};

/// Compiled per-variable data. Rows are indexed in mixed radix over the
/// parents' domains, first parent most significant.
struct CompiledVar {
  std::string name;
  std::vector<std::string> domain;
  VarKind kind = VarKind::Stochastic;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> children;
  std::vector<std::size_t> strides;
  std::size_t rows = 1;
  std::vector<std::vector<Rational>> cpt;  // stochastic: [row][value]
  std::vector<std::uint32_t> table;        // deterministic: [row] -> value index
  std::vector<Rational> utility;           // utility: [row]

  std::optional<std::uint32_t> value_index(std::string_view value) const;
};

/// Immutable validated decision model. Copies share storage.
class DilemmaModel {
 public:
  const std::string& name() const;
  DilemmaModel with_name(std::string name) const;

  std::size_t size() const;
  const CompiledVar& var(std::size_t index) const;
  const std::vector<CompiledVar>& vars() const;
  std::optional<std::size_t> find(std::string_view name) const;
  /// As find(), throwing UnknownVariable.
  std::size_t index(std::string_view name) const;
  const std::vector<std::size_t>& topological_order() const;

  const Designations& designations() const;
  std::size_t act_index() const;
  std::optional<std::size_t> obs_index() const;
  std::size_t value_index() const;
  const std::vector<std::string>& actions() const;

  /// Observation values with no fdt node; non-empty means FDT cannot be
  /// evaluated for those observations.
  std::vector<std::string> fdt_missing_observations() const;

  /// Reconstructed declarations and nodes, sorted by variable name, with
  /// every CPT entry written out.
  std::vector<VariableDecl> declarations() const;
  std::vector<Node> nodes() const;
  Node node(std::string_view variable) const;

  bool is_ancestor(std::size_t ancestor, std::size_t of) const;

  struct Impl;

 private:
  explicit DilemmaModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend DilemmaModel build_model(std::vector<VariableDecl>, std::vector<Node>, Designations, std::string);
};

std::vector<Violation> check_model(const std::vector<VariableDecl>& decls, const std::vector<Node>& nodes,
                                   const Designations& desig);

/// Validates and compiles. Throws ModelError listing every violation.
DilemmaModel build_model(std::vector<VariableDecl> decls, std::vector<Node> nodes, Designations desig,
                         std::string name = {});

/// Same graph, tables, and designations; the model name is not compared.
bool structurally_equal(const DilemmaModel& a, const DilemmaModel& b);

/// Rebuilds `model` with one node swapped out; the variable's declared kind
/// follows the replacement node.
DilemmaModel replace_node(const DilemmaModel& model, Node replacement);

bool is_identifier(std::string_view text);

/// Convenience for building models in code: tables are filled by
/// enumerating the parents' domain product. Parents must already be added.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::string name = {}) : name_(std::move(name)) {}

  ModelBuilder& prior(const std::string& variable, std::vector<std::string> domain,
                      const std::vector<Rational>& probabilities);
  ModelBuilder& cpt(const std::string& variable, std::vector<std::string> domain,
                    std::vector<std::string> parents,
                    const std::function<std::vector<Rational>(const Row&)>& row);
  ModelBuilder& function(const std::string& variable, std::vector<std::string> domain,
                         std::vector<std::string> parents, const std::function<std::string(const Row&)>& f);
  ModelBuilder& utility(const std::string& variable, std::vector<std::string> parents,
                        const std::function<Rational(const Row&)>& u);

  DilemmaModel build(Designations desig) const;

 private:
  std::vector<Row> rows_for(const std::vector<std::string>& parents) const;
  const VariableDecl& decl(const std::string& name) const;

  std::string name_;
  std::vector<VariableDecl> decls_;
  std::vector<Node> nodes_;
};

/// All parent-value tuples in mixed-radix order.
std::vector<Row> product_rows(const std::vector<std::vector<std::string>>& domains);

}  // namespace dtheory
