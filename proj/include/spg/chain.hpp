#pragma once

#include "spg/arena.hpp"
#include "spg/strategy.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <vector>

namespace spg {

using NodeId = std::uint32_t;
using Memory = FiniteMemoryStrategy::Memory;

struct ChainNode {
  StateId state = 0;
  Memory m1 = 0;
  Memory m2 = 0;
};

/// One (action, successor) outcome leaving a node. `prob` already includes
/// the strategy's weight for the action.
struct ChainEdge {
  PairIndex pair = 0;
  NodeId target = 0;
  Rational prob;
};

/// Markov chain on arena states x P1 memory x P2 memory. All product nodes
/// are present, reachable or not.
struct InducedChain {
  std::vector<ChainNode> nodes;
  std::vector<std::vector<ChainEdge>> edges;
  /// Successor distribution with parallel edges merged, sorted by target.
  std::vector<std::vector<std::pair<NodeId, Rational>>> rows;
  /// Action law used at each node.
  std::vector<ActionDistribution> action_weights;
  std::size_t memory1 = 1;
  std::size_t memory2 = 1;

  NodeId node(StateId s, Memory m1, Memory m2) const {
    return static_cast<NodeId>((static_cast<std::size_t>(s) * memory1 + m1) * memory2 + m2);
  }
  std::size_t size() const { return nodes.size(); }

  /// Nodes reachable from `source` with positive probability.
  std::vector<bool> reachable_from(NodeId source) const;
};

/// Tarjan's algorithm over an adjacency list. Returns the component of each
/// node; `count` receives the number of components.
std::vector<std::size_t> strongly_connected_components(const std::vector<std::vector<NodeId>>& adjacency,
                                                       std::size_t& count);

/// Throws ValidationError("memory automaton not total") when a needed update
/// entry is missing.
InducedChain induce_chain(const Arena& arena, const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau);

/// Bottom SCC with its stationary law and colour statistics. Statistics are
/// filled only for the fields meaningful for the arena's colour kind.
struct RecurrentClassSummary {
  std::vector<NodeId> nodes;
  std::vector<Rational> stationary;
  /// Stationary-weighted mean of scalar colours (rewards, increments,
  /// flagged rewards).
  std::optional<Rational> mean;
  std::vector<Rational> vector_mean;
  std::optional<Rational> max_scalar;
  std::optional<Rational> min_scalar;
  std::optional<long> max_priority;
  bool buchi_present = false;
  /// Some potential phi has increment(edge) = phi(target) - phi(source) on
  /// every edge of the class; only computed for increment colours.
  bool has_potential = false;
};

std::vector<RecurrentClassSummary> bottom_sccs(const Arena& arena, const InducedChain& chain);

/// Probability of ending in each class (indexed like `classes`).
std::vector<Rational> absorption(const InducedChain& chain, const std::vector<RecurrentClassSummary>& classes,
                                 NodeId source);

/// Solution of v = r + Lambda P v over all nodes.
std::vector<Rational> discounted_values(const Arena& arena, const InducedChain& chain);

nlohmann::json chain_to_json(const Arena& arena, const InducedChain& chain);

}  // namespace spg
