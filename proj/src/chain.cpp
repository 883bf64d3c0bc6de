#include "spg/chain.hpp"

#include "spg/errors.hpp"
#include "spg/linalg.hpp"

#include <algorithm>
#include <functional>

namespace spg {

std::vector<bool> InducedChain::reachable_from(NodeId source) const {
  std::vector<bool> seen(size(), false);
  std::vector<NodeId> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    for (const auto& [t, p] : rows[n]) {
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

InducedChain induce_chain(const Arena& arena, const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau) {
  if (sigma.player() != Player::P1 || tau.player() != Player::P2) {
    throw ValidationError("induce_chain expects a P1 strategy and a P2 strategy");
  }
  if (sigma.num_states() != arena.num_states() || tau.num_states() != arena.num_states()) {
    throw ValidationError("strategy was built for a different arena");
  }
  InducedChain chain;
  chain.memory1 = sigma.memory_size();
  chain.memory2 = tau.memory_size();
  const std::size_t n = arena.num_states() * chain.memory1 * chain.memory2;
  chain.nodes.resize(n);
  chain.edges.resize(n);
  chain.rows.resize(n);
  chain.action_weights.resize(n);
  for (StateId s = 0; s < arena.num_states(); ++s) {
    for (Memory m1 = 0; m1 < chain.memory1; ++m1) {
      for (Memory m2 = 0; m2 < chain.memory2; ++m2) {
        const NodeId id = chain.node(s, m1, m2);
        chain.nodes[id] = {s, m1, m2};
        const auto& law = arena.owner(s) == Player::P1 ? sigma.choice(m1, s) : tau.choice(m2, s);
        if (law.empty()) {
          throw ValidationError("strategy has no choice at state " + arena.state_name(s) + " in memory " +
                                (arena.owner(s) == Player::P1 ? sigma.memory_name(m1) : tau.memory_name(m2)));
        }
        chain.action_weights[id] = law;
        std::map<NodeId, Rational> merged;
        for (const auto& [a, w] : law) {
          if (sgn(w) == 0) continue;
          const PairIndex pair = arena.pair_index(s, a);
          for (const auto& succ : arena.action(s, a).successors) {
            if (sgn(succ.prob) == 0) continue;
            const Memory n1 = sigma.update(m1, pair, succ.state);
            const Memory n2 = tau.update(m2, pair, succ.state);
            const NodeId target = chain.node(succ.state, n1, n2);
            Rational p = w * succ.prob;
            merged[target] += p;
            chain.edges[id].push_back({pair, target, std::move(p)});
          }
        }
        chain.rows[id].assign(merged.begin(), merged.end());
      }
    }
  }
  return chain;
}

std::vector<std::size_t> strongly_connected_components(const std::vector<std::vector<NodeId>>& adjacency,
                                                       std::size_t& count) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), comp(n, SIZE_MAX);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  count = 0;
  // Explicit call stack: (node, next adjacency position).
  std::vector<std::pair<NodeId, std::size_t>> frames;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adjacency[v].size()) {
        const NodeId w = adjacency[v][pos++];
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

namespace {

void fill_statistics(const Arena& arena, const InducedChain& chain, RecurrentClassSummary& cls) {
  const ColourKind kind = arena.colour_kind();
  if (kind == ColourKind::Letter) return;
  if (kind == ColourKind::Vector) {
    cls.vector_mean.assign(arena.colour_dimension(), Rational(0));
    for (std::size_t i = 0; i < cls.nodes.size(); ++i) {
      const StateId s = chain.nodes[cls.nodes[i]].state;
      for (const auto& [a, w] : chain.action_weights[cls.nodes[i]]) {
        if (sgn(w) == 0) continue;
        const auto& v = std::get<RewardVector>(arena.colour(s, a)).values;
        for (std::size_t d = 0; d < v.size(); ++d) cls.vector_mean[d] += cls.stationary[i] * w * v[d];
      }
    }
    return;
  }
  Rational mean = 0;
  for (std::size_t i = 0; i < cls.nodes.size(); ++i) {
    const StateId s = chain.nodes[cls.nodes[i]].state;
    for (const auto& [a, w] : chain.action_weights[cls.nodes[i]]) {
      if (sgn(w) == 0) continue;
      const auto& colour = arena.colour(s, a);
      const Rational value = scalar_of(colour);
      mean += cls.stationary[i] * w * value;
      if (!cls.max_scalar || value > *cls.max_scalar) cls.max_scalar = value;
      if (!cls.min_scalar || value < *cls.min_scalar) cls.min_scalar = value;
      if (kind == ColourKind::Priority) {
        const long p = std::get<Priority>(colour).value;
        if (!cls.max_priority || p > *cls.max_priority) cls.max_priority = p;
      }
      if (kind == ColourKind::FlaggedReward && std::get<FlaggedReward>(colour).buchi) cls.buchi_present = true;
    }
  }
  cls.mean = mean;
  if (kind != ColourKind::Increment) return;

  // Potential search: propagate phi along class edges and check every edge.
  std::map<NodeId, Rational> phi;
  std::vector<bool> member(chain.size(), false);
  for (NodeId n : cls.nodes) member[n] = true;
  phi[cls.nodes.front()] = 0;
  std::vector<NodeId> queue{cls.nodes.front()};
  bool ok = true;
  while (!queue.empty() && ok) {
    const NodeId n = queue.back();
    queue.pop_back();
    for (const auto& e : chain.edges[n]) {
      if (!member[e.target]) continue;
      const Rational want = phi[n] + scalar_of(arena.colour(e.pair));
      const auto it = phi.find(e.target);
      if (it == phi.end()) {
        phi.emplace(e.target, want);
        queue.push_back(e.target);
      } else if (it->second != want) {
        ok = false;
        break;
      }
    }
  }
  cls.has_potential = ok;
}

}  // namespace

std::vector<RecurrentClassSummary> bottom_sccs(const Arena& arena, const InducedChain& chain) {
  std::vector<std::vector<NodeId>> adjacency(chain.size());
  for (NodeId n = 0; n < chain.size(); ++n) {
    for (const auto& [t, p] : chain.rows[n]) adjacency[n].push_back(t);
  }
  std::size_t count = 0;
  const auto comp = strongly_connected_components(adjacency, count);
  std::vector<bool> closed(count, true);
  std::vector<std::vector<NodeId>> members(count);
  for (NodeId n = 0; n < chain.size(); ++n) {
    members[comp[n]].push_back(n);
    for (const auto& [t, p] : chain.rows[n]) {
      if (comp[t] != comp[n]) closed[comp[n]] = false;
    }
  }
  std::vector<RecurrentClassSummary> out;
  for (std::size_t c = 0; c < count; ++c) {
    if (!closed[c]) continue;
    RecurrentClassSummary cls;
    cls.nodes = members[c];
    const std::size_t k = cls.nodes.size();
    std::map<NodeId, std::size_t> local;
    for (std::size_t i = 0; i < k; ++i) local[cls.nodes[i]] = i;
    // pi (P - I) = 0 with the last balance equation replaced by sum pi = 1.
    RationalMatrix a(k, k);
    std::vector<Rational> b(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
      a(i, i) -= 1;
      for (const auto& [t, p] : chain.rows[cls.nodes[i]]) a(local.at(t), i) += p;
    }
    for (std::size_t i = 0; i < k; ++i) a(k - 1, i) = 1;
    b[k - 1] = 1;
    auto pi = solve_linear(std::move(a), std::move(b));
    if (!pi) throw Error("stationary system of a bottom class is singular");
    cls.stationary = std::move(*pi);
    fill_statistics(arena, chain, cls);
    out.push_back(std::move(cls));
  }
  if (out.empty()) throw Error("finite chain without a bottom class");
  return out;
}

std::vector<Rational> absorption(const InducedChain& chain, const std::vector<RecurrentClassSummary>& classes,
                                 NodeId source) {
  std::vector<std::size_t> class_of(chain.size(), SIZE_MAX);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (NodeId n : classes[c].nodes) class_of[n] = c;
  }
  std::vector<Rational> out(classes.size(), Rational(0));
  if (class_of[source] != SIZE_MAX) {
    out[class_of[source]] = 1;
    return out;
  }
  const auto reach = chain.reachable_from(source);
  std::vector<NodeId> transient;
  std::vector<std::size_t> local(chain.size(), SIZE_MAX);
  for (NodeId n = 0; n < chain.size(); ++n) {
    if (reach[n] && class_of[n] == SIZE_MAX) {
      local[n] = transient.size();
      transient.push_back(n);
    }
  }
  const std::size_t k = transient.size();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    // x = P_TT x + P_T,c
    RationalMatrix a(k, k);
    std::vector<Rational> b(k, Rational(0));
    bool touched = false;
    for (std::size_t i = 0; i < k; ++i) {
      a(i, i) += 1;
      for (const auto& [t, p] : chain.rows[transient[i]]) {
        if (local[t] != SIZE_MAX) {
          a(i, local[t]) -= p;
        } else if (class_of[t] == c) {
          b[i] += p;
          touched = true;
        }
      }
    }
    if (!touched) continue;
    auto x = solve_linear(std::move(a), std::move(b));
    if (!x) throw Error("absorption system is singular");
    out[c] = (*x)[local[source]];
  }
  return out;
}

std::vector<Rational> discounted_values(const Arena& arena, const InducedChain& chain) {
  if (arena.colour_kind() != ColourKind::Discounted) {
    throw KindMismatch("discounted values need reward-discount colours, arena has " +
                       to_string(arena.colour_kind()));
  }
  const std::size_t n = chain.size();
  RationalMatrix a(n, n);
  std::vector<Rational> b(n, Rational(0));
  for (NodeId i = 0; i < n; ++i) {
    a(i, i) += 1;
    const StateId s = chain.nodes[i].state;
    for (const auto& [act, w] : chain.action_weights[i]) {
      b[i] += w * std::get<DiscountedReward>(arena.colour(s, act)).value;
    }
    for (const auto& e : chain.edges[i]) {
      a(i, e.target) -= e.prob * std::get<DiscountedReward>(arena.colour(e.pair)).discount;
    }
  }
  auto v = solve_linear(std::move(a), std::move(b));
  if (!v) throw Error("discounted system is singular");
  return *v;
}

nlohmann::json chain_to_json(const Arena& arena, const InducedChain& chain) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId i = 0; i < chain.size(); ++i) {
    const auto& node = chain.nodes[i];
    nlohmann::json succ = nlohmann::json::array();
    for (const auto& [t, p] : chain.rows[i]) succ.push_back({{"node", t}, {"prob", to_string(p)}});
    nlohmann::json law = nlohmann::json::object();
    for (const auto& [a, w] : chain.action_weights[i]) law[arena.action(node.state, a).name] = to_string(w);
    nodes.push_back({{"node", i},
                     {"state", arena.state_name(node.state)},
                     {"m1", node.m1},
                     {"m2", node.m2},
                     {"actions", law},
                     {"successors", succ}});
  }
  return {{"nodes", nodes}};
}

}  // namespace spg
