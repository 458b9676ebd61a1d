#pragma once

// Seeded generators of small valid decision models for property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dtheory/model.hpp"

namespace gen {

struct Generated {
  std::vector<dtheory::VariableDecl> decls;
  std::vector<dtheory::Node> nodes;
  dtheory::Designations desig;

  dtheory::DilemmaModel build() const { return dtheory::build_model(decls, nodes, desig, "random"); }
};

struct Options {
  std::size_t max_vars = 6;
  std::size_t max_domain = 3;
  bool allow_obs = true;
  bool allow_fdt = true;
};

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::string> labels(std::size_t k) {
  static const char* pool[] = {"a", "b", "c", "d"};
  return {pool, pool + k};
}

/// A probability vector of length k with exact rational entries; may contain zeros.
inline std::vector<dtheory::Rational> distribution(std::mt19937_64& rng, std::size_t k, bool positive = false) {
  std::vector<long> w(k);
  long total = 0;
  for (auto& x : w) {
    x = static_cast<long>(uniform(rng, positive ? 1 : 0, 5));
    total += x;
  }
  if (total == 0) {
    w[uniform(rng, 0, k - 1)] = 1;
    total = 1;
  }
  std::vector<dtheory::Rational> out;
  for (auto x : w) out.emplace_back(x, total);
  return out;
}

inline dtheory::Rational random_payoff(std::mt19937_64& rng) {
  const long n = static_cast<long>(uniform(rng, 0, 40)) - 20;
  return chance(rng, 0.2) ? dtheory::Rational(n, static_cast<long>(uniform(rng, 1, 4))) : dtheory::Rational(n);
}

inline std::vector<std::string> shuffled_names(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::string> pool{"Alpha", "Bravo", "Charlie", "Delta", "Echo",  "Foxtrot",
                                "Golf",  "Hotel", "India",   "Juliet", "Kilo", "Lima"};
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(n);
  return pool;
}

inline std::vector<dtheory::Row> rows_of(const std::vector<dtheory::VariableDecl>& decls,
                                         const std::vector<std::string>& parents) {
  std::vector<std::vector<std::string>> domains;
  for (const auto& p : parents) {
    for (const auto& d : decls) {
      if (d.name == p) domains.push_back(d.domain);
    }
  }
  return dtheory::product_rows(domains);
}

inline void add_stochastic(std::mt19937_64& rng, Generated& g, const std::string& name, std::size_t k,
                           const std::vector<std::string>& parents, bool positive = false) {
  g.decls.push_back({name, labels(k), dtheory::VarKind::Stochastic});
  dtheory::StochasticNode node{name, parents, {}};
  for (const auto& r : rows_of(g.decls, parents)) {
    const auto probs = distribution(rng, k, positive);
    for (std::size_t i = 0; i < k; ++i) node.cpt[r][labels(k)[i]] = probs[i];
  }
  g.nodes.emplace_back(std::move(node));
}

inline void add_deterministic(std::mt19937_64& rng, Generated& g, const std::string& name, std::size_t k,
                              const std::vector<std::string>& parents) {
  g.decls.push_back({name, labels(k), dtheory::VarKind::Deterministic});
  dtheory::DeterministicNode node{name, parents, {}};
  for (const auto& r : rows_of(g.decls, parents)) node.table[r] = labels(k)[uniform(rng, 0, k - 1)];
  g.nodes.emplace_back(std::move(node));
}

inline void add_utility(std::mt19937_64& rng, Generated& g, const std::string& name,
                        const std::vector<std::string>& candidates, std::size_t max_parents = 3) {
  std::vector<std::string> parents;
  for (const auto& c : candidates) {
    if (parents.size() < max_parents && chance(rng, 0.5)) parents.push_back(c);
  }
  std::shuffle(parents.begin(), parents.end(), rng);
  g.decls.push_back({name, {}, dtheory::VarKind::Utility});
  dtheory::UtilityNode node{name, parents, {}};
  for (const auto& r : rows_of(g.decls, parents)) node.table[r] = random_payoff(rng);
  g.nodes.emplace_back(std::move(node));
  g.desig.value = name;
}

inline std::size_t domain_size(const Generated& g, const std::string& name) {
  for (const auto& d : g.decls) {
    if (d.name == name) return d.domain.size();
  }
  return 0;
}

/// Random DAG over 2..max_vars chance/deterministic variables plus one utility node.
inline Generated random_model(std::mt19937_64& rng, const Options& opt = {}) {
  Generated g;
  const auto n = uniform(rng, 2, opt.max_vars);
  const auto names = shuffled_names(rng, n + 1);
  const auto act_pos = uniform(rng, 0, n - 1);
  std::vector<std::string> added;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = i == act_pos ? uniform(rng, 2, opt.max_domain) : uniform(rng, 1, opt.max_domain);
    std::vector<std::string> parents;
    for (const auto& a : added) {
      if (parents.size() < 3 && chance(rng, 0.4)) parents.push_back(a);
    }
    if (parents.empty() || chance(rng, 0.6)) add_stochastic(rng, g, names[i], k, parents);
    else add_deterministic(rng, g, names[i], k, parents);
    added.push_back(names[i]);
  }
  add_utility(rng, g, names[n], added);
  g.desig.act = names[act_pos];

  if (opt.allow_obs && chance(rng, 0.5)) {
    std::vector<std::string> others;
    for (const auto& a : added) {
      if (a != g.desig.act) others.push_back(a);
    }
    g.desig.obs = others[uniform(rng, 0, others.size() - 1)];
  }
  if (opt.allow_fdt && chance(rng, 0.7)) {
    std::vector<std::string> same;
    for (const auto& a : added) {
      if (domain_size(g, a) == domain_size(g, g.desig.act)) same.push_back(a);
    }
    auto pick = [&] { return same[uniform(rng, 0, same.size() - 1)]; };
    if (g.desig.obs) {
      for (const auto& o : labels(domain_size(g, *g.desig.obs))) {
        if (chance(rng, 0.8)) g.desig.fdt[o] = pick();
      }
    } else {
      g.desig.fdt[std::string(dtheory::kNoObservation)] = pick();
    }
  }
  return g;
}

/// Models where the fdt node is Act itself (a root) or the sole parent of an
/// identity Act; nothing else depends on the fdt node.
inline Generated random_agreement_model(std::mt19937_64& rng) {
  Generated g;
  const auto names = shuffled_names(rng, 8);
  const auto k = uniform(rng, 2, 3);
  const bool act_is_root = chance(rng, 0.3);
  std::string fdt;
  std::vector<std::string> pool;
  std::size_t next = 0;
  const auto act = names[next++];
  if (act_is_root) {
    add_stochastic(rng, g, act, k, {}, true);
    fdt = act;
  } else {
    fdt = names[next++];
    add_stochastic(rng, g, fdt, k, {}, true);
    g.decls.push_back({act, labels(k), dtheory::VarKind::Deterministic});
    dtheory::DeterministicNode id{act, {fdt}, {}};
    for (const auto& v : labels(k)) id.table[{v}] = v;
    g.nodes.emplace_back(std::move(id));
  }
  pool.push_back(act);
  const auto roots = uniform(rng, 0, 2);
  for (std::size_t i = 0; i < roots; ++i) {
    add_stochastic(rng, g, names[next], uniform(rng, 1, 3), {});
    pool.push_back(names[next++]);
  }
  const auto downstream = uniform(rng, 0, 2);
  for (std::size_t i = 0; i < downstream; ++i) {
    std::vector<std::string> parents;
    for (const auto& p : pool) {
      if (parents.size() < 3 && chance(rng, 0.5)) parents.push_back(p);
    }
    if (parents.empty() || chance(rng, 0.5)) add_stochastic(rng, g, names[next], uniform(rng, 1, 3), parents);
    else add_deterministic(rng, g, names[next], uniform(rng, 1, 3), parents);
    pool.push_back(names[next++]);
  }
  add_utility(rng, g, names[next], pool);
  g.desig.act = act;
  g.desig.fdt[std::string(dtheory::kNoObservation)] = fdt;
  return g;
}

}  // namespace gen
