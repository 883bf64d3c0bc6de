#include "spg/mdp.hpp"

#include "spg/chain.hpp"
#include "spg/errors.hpp"
#include "spg/linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

namespace spg {

namespace {

constexpr std::uint64_t kComponentBudget = 1'000'000;

struct MdpAction {
  /// Action law at the node: sigma's mixture at P1 nodes, one action at P2.
  ActionDistribution law;
  std::vector<ChainEdge> edges;
};

struct Mdp {
  std::size_t num_states = 0;
  std::vector<ChainNode> nodes;
  std::vector<std::vector<MdpAction>> actions;
};

Mdp freeze_sigma(const Arena& arena, const FiniteMemoryStrategy& sigma) {
  Mdp mdp;
  const std::size_t n = arena.num_states();
  mdp.num_states = n;
  const std::size_t total = n * sigma.memory_size();
  mdp.nodes.resize(total);
  mdp.actions.resize(total);
  for (Memory m = 0; m < sigma.memory_size(); ++m) {
    for (StateId s = 0; s < n; ++s) {
      const NodeId id = static_cast<NodeId>(m * n + s);
      mdp.nodes[id] = {s, m, 0};
      auto add = [&](MdpAction& act, ActionIndex a, const Rational& w) {
        const PairIndex pair = arena.pair_index(s, a);
        for (const auto& succ : arena.action(s, a).successors) {
          if (sgn(succ.prob) == 0) continue;
          const Memory next = sigma.update(m, pair, succ.state);
          act.edges.push_back({pair, static_cast<NodeId>(next * n + succ.state), w * succ.prob});
        }
      };
      if (arena.owner(s) == Player::P1) {
        MdpAction act;
        act.law = sigma.choice(m, s);
        if (act.law.empty()) throw ValidationError("sigma has no choice at " + arena.state_name(s));
        for (const auto& [a, w] : act.law) {
          if (sgn(w) > 0) add(act, a, w);
        }
        mdp.actions[id].push_back(std::move(act));
      } else {
        for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
          MdpAction act;
          act.law = {{a, Rational(1)}};
          add(act, a, Rational(1));
          mdp.actions[id].push_back(std::move(act));
        }
      }
    }
  }
  return mdp;
}

/// Maximal end components: lists of (node, allowed actions).
std::vector<std::vector<std::pair<NodeId, std::vector<std::size_t>>>> end_components(const Mdp& mdp) {
  const std::size_t n = mdp.nodes.size();
  std::vector<std::vector<bool>> allowed(n);
  std::vector<bool> alive(n, true);
  for (NodeId v = 0; v < n; ++v) allowed[v].assign(mdp.actions[v].size(), true);
  std::vector<std::size_t> comp;
  while (true) {
    std::vector<std::vector<NodeId>> adjacency(n);
    for (NodeId v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (std::size_t k = 0; k < mdp.actions[v].size(); ++k) {
        if (!allowed[v][k]) continue;
        for (const auto& e : mdp.actions[v][k].edges) {
          if (alive[e.target]) adjacency[v].push_back(e.target);
        }
      }
    }
    std::size_t count = 0;
    comp = strongly_connected_components(adjacency, count);
    bool changed = false;
    for (NodeId v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      bool any = false;
      for (std::size_t k = 0; k < mdp.actions[v].size(); ++k) {
        if (!allowed[v][k]) continue;
        for (const auto& e : mdp.actions[v][k].edges) {
          if (!alive[e.target] || comp[e.target] != comp[v]) {
            allowed[v][k] = false;
            changed = true;
            break;
          }
        }
        any = any || allowed[v][k];
      }
      if (!any) {
        alive[v] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::map<std::size_t, std::vector<std::pair<NodeId, std::vector<std::size_t>>>> groups;
  for (NodeId v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    std::vector<std::size_t> acts;
    for (std::size_t k = 0; k < allowed[v].size(); ++k) {
      if (allowed[v][k]) acts.push_back(k);
    }
    groups[comp[v]].push_back({v, std::move(acts)});
  }
  std::vector<std::vector<std::pair<NodeId, std::vector<std::size_t>>>> out;
  for (auto& [c, members] : groups) out.push_back(std::move(members));
  return out;
}

using Members = std::vector<std::pair<NodeId, std::vector<std::size_t>>>;

/// Long-run frequencies x(v, k) of the end component's (node, action) pairs:
/// flow conservation at every node and total mass 1. The vertices of this
/// polytope are the recurrent classes of P2's pure stationary choices.
struct FrequencyPolytope {
  std::vector<std::pair<std::size_t, std::size_t>> columns;
  RationalMatrix flow;
  std::vector<Rational> rhs;
};

FrequencyPolytope frequencies(const Mdp& mdp, const Members& members, std::size_t extra_rows,
                              std::size_t extra_cols, const std::function<bool(const MdpAction&)>& keep) {
  std::map<NodeId, std::size_t> local;
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i].first] = i;
  FrequencyPolytope out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t k : members[i].second) {
      if (keep(mdp.actions[members[i].first][k])) out.columns.emplace_back(i, k);
    }
  }
  const std::size_t rows = members.size() + 1 + extra_rows;
  out.flow = RationalMatrix(rows, out.columns.size() + extra_cols);
  out.rhs.assign(rows, 0);
  for (std::size_t j = 0; j < out.columns.size(); ++j) {
    const auto [i, k] = out.columns[j];
    out.flow(i, j) += 1;
    for (const auto& e : mdp.actions[members[i].first][k].edges) out.flow(local.at(e.target), j) -= e.prob;
    out.flow(members.size(), j) = 1;
  }
  out.rhs[members.size()] = 1;
  return out;
}

/// Weighted colour of an action: sigma's mixture at P1 nodes.
Rational mean_reward(const Arena& arena, const Mdp& mdp, NodeId v, const MdpAction& act, std::size_t dim) {
  Rational r = 0;
  for (const auto& [a, w] : act.law) {
    const auto& colour = arena.colour(mdp.nodes[v].state, a);
    if (const auto* vec = std::get_if<RewardVector>(&colour)) {
      r += w * vec->values.at(dim);
    } else {
      r += w * scalar_of(colour);
    }
  }
  return r;
}

bool has_buchi(const Arena& arena, const Mdp& mdp, NodeId v, const MdpAction& act) {
  for (const auto& [a, w] : act.law) {
    const auto* c = std::get_if<FlaggedReward>(&arena.colour(mdp.nodes[v].state, a));
    if (c && c->buchi && sgn(w) > 0) return true;
  }
  return false;
}

/// Least class mean among classes using only actions accepted by `keep`.
std::optional<Rational> least_class_mean(const Arena& arena, const Mdp& mdp, const Members& members,
                                         const std::function<bool(NodeId, const MdpAction&)>& keep) {
  std::map<const MdpAction*, NodeId> owner;
  for (const auto& [v, acts] : members) {
    for (std::size_t k : acts) owner[&mdp.actions[v][k]] = v;
  }
  auto poly = frequencies(mdp, members, 0, 0, [&](const MdpAction& a) { return keep(owner.at(&a), a); });
  std::vector<Rational> cost(poly.columns.size());
  for (std::size_t j = 0; j < poly.columns.size(); ++j) {
    const auto [i, k] = poly.columns[j];
    const NodeId v = members[i].first;
    cost[j] = mean_reward(arena, mdp, v, mdp.actions[v][k], 0);
  }
  const auto lp = linear_minimum(poly.flow, poly.rhs, cost);
  if (lp.status != LinearProgramResult::Status::Optimal) return std::nullopt;
  return lp.value;
}

/// Can P2 keep every coordinate's mean strictly negative? True iff some
/// frequency vector has all weighted means below 0, i.e. the convex hull of
/// the class mean vectors meets the open negative orthant.
bool reaches_negative_orthant(const Arena& arena, const Mdp& mdp, const Members& members, std::size_t k) {
  // Columns: frequencies, then t = t+ - t-, then one slack per coordinate.
  // Rows d: sum x r_d + t + slack_d = 0. Maximise t.
  auto poly = frequencies(mdp, members, k, 2 + k, [](const MdpAction&) { return true; });
  const std::size_t f = poly.columns.size(), base = members.size() + 1;
  for (std::size_t d = 0; d < k; ++d) {
    for (std::size_t j = 0; j < f; ++j) {
      const auto [i, a] = poly.columns[j];
      const NodeId v = members[i].first;
      poly.flow(base + d, j) = mean_reward(arena, mdp, v, mdp.actions[v][a], d);
    }
    poly.flow(base + d, f) = 1;
    poly.flow(base + d, f + 1) = -1;
    poly.flow(base + d, f + 2 + d) = 1;
  }
  std::vector<Rational> cost(f + 2 + k, 0);
  cost[f] = -1;
  cost[f + 1] = 1;
  const auto lp = linear_minimum(poly.flow, poly.rhs, cost);
  if (lp.status == LinearProgramResult::Status::Infeasible) throw Error("end component has no frequency vector");
  return lp.status == LinearProgramResult::Status::Unbounded || sgn(lp.value) < 0;
}

/// Least class value over P2's pure stationary choices inside the
/// component, by enumeration. Used for the payoffs that are not a function
/// of the class mean.
Rational enumerated_component_value(const Arena& arena, const PayoffSpec& spec, const Mdp& mdp,
                                    const Members& members) {
  std::map<NodeId, NodeId> local;
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i].first] = static_cast<NodeId>(i);
  std::uint64_t combos = 1;
  for (const auto& [v, acts] : members) {
    combos *= acts.size();
    if (combos > kComponentBudget) throw BudgetExceeded("end component has too many pure stationary choices");
  }
  std::optional<Rational> best;
  for (std::uint64_t code = 0; code < combos; ++code) {
    InducedChain chain;
    chain.nodes.resize(members.size());
    chain.edges.resize(members.size());
    chain.rows.resize(members.size());
    chain.action_weights.resize(members.size());
    std::uint64_t rest = code;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& [v, acts] = members[i];
      const auto& act = mdp.actions[v][acts[rest % acts.size()]];
      rest /= acts.size();
      chain.nodes[i] = mdp.nodes[v];
      chain.action_weights[i] = act.law;
      std::map<NodeId, Rational> merged;
      for (const auto& e : act.edges) {
        const NodeId t = local.at(e.target);
        chain.edges[i].push_back({e.pair, t, e.prob});
        merged[t] += e.prob;
      }
      chain.rows[i].assign(merged.begin(), merged.end());
    }
    for (const auto& cls : bottom_sccs(arena, chain)) {
      Rational v = class_value(spec, cls);
      if (!best || v < *best) best = std::move(v);
    }
  }
  return *best;
}

/// Everything the mean-based component values depend on: the transition
/// structure in local indices and each action's weighted colour.
std::string component_key(const Arena& arena, const PayoffSpec& spec, const Mdp& mdp, const Members& members) {
  std::map<NodeId, std::size_t> local;
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i].first] = i;
  const std::size_t dims = spec.kind == PayoffKind::OptimisticGeneralizedMean ? spec.dimension : 1;
  std::string key = spec.name();
  for (const auto& [v, acts] : members) {
    key += '|';
    for (std::size_t k : acts) {
      const auto& act = mdp.actions[v][k];
      key += '[';
      for (std::size_t d = 0; d < dims; ++d) key += mean_reward(arena, mdp, v, act, d).get_str() + ',';
      if (has_buchi(arena, mdp, v, act)) key += 'B';
      for (const auto& e : act.edges) key += std::to_string(local.at(e.target)) + ':' + e.prob.get_str() + ';';
      key += ']';
    }
  }
  return key;
}

Rational mean_component_value(const Arena& arena, const PayoffSpec& spec, const Mdp& mdp, const Members& members) {
  auto all = [](NodeId, const MdpAction&) { return true; };
  switch (spec.kind) {
    case PayoffKind::Mean: return *least_class_mean(arena, mdp, members, all);
    case PayoffKind::PositiveAverage: return *least_class_mean(arena, mdp, members, all) > 0 ? 1 : 0;
    case PayoffKind::MeanCoBuchi: {
      bool flagged = false;
      for (const auto& [v, acts] : members) {
        for (std::size_t k : acts) flagged = flagged || has_buchi(arena, mdp, v, mdp.actions[v][k]);
      }
      const auto clean = least_class_mean(arena, mdp, members, [&](NodeId v, const MdpAction& a) {
        return !has_buchi(arena, mdp, v, a);
      });
      if (!flagged) return *clean;
      if (!clean) return -spec.penalty;
      return std::min<Rational>(-spec.penalty, *clean);
    }
    case PayoffKind::OptimisticGeneralizedMean:
      return reaches_negative_orthant(arena, mdp, members, spec.dimension) ? 0 : 1;
    default: throw UnsupportedSpec("no frequency program for " + spec.name());
  }
}

Rational component_value(const Arena& arena, const PayoffSpec& spec, const Mdp& mdp, const Members& members) {
  switch (spec.kind) {
    case PayoffKind::Mean:
    case PayoffKind::PositiveAverage:
    case PayoffKind::MeanCoBuchi:
    case PayoffKind::OptimisticGeneralizedMean: break;
    default: return enumerated_component_value(arena, spec, mdp, members);
  }
  // Strategy sweeps meet the same components over and over.
  thread_local std::unordered_map<std::string, Rational> cache;
  auto key = component_key(arena, spec, mdp, members);
  if (const auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 200'000) cache.clear();
  Rational value = mean_component_value(arena, spec, mdp, members);
  cache.emplace(std::move(key), value);
  return value;
}

/// Option of a node in a minimising stopping problem: a constant payout or
/// a distribution over nodes.
struct Option {
  bool stop = false;
  Rational payout;
  /// Added to the target values (discounted rewards); zero otherwise.
  Rational reward;
  std::vector<std::pair<NodeId, Rational>> next;
};

/// Policy iteration for min over options of reward + sum p x(next), or the
/// stop payout. Every policy must have a non-singular evaluation system.
std::vector<Rational> minimise(const std::vector<std::vector<Option>>& options) {
  const std::size_t n = options.size();
  std::vector<std::size_t> policy(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < options[v].size(); ++k) {
      if (options[v][k].stop) {
        policy[v] = k;
        break;
      }
    }
  }
  auto option_value = [](const Option& o, const std::vector<Rational>& x) {
    if (o.stop) return o.payout;
    Rational total = o.reward;
    for (const auto& [t, p] : o.next) total += p * x[t];
    return total;
  };
  while (true) {
    RationalMatrix a(n, n);
    std::vector<Rational> b(n, Rational(0));
    for (std::size_t v = 0; v < n; ++v) {
      const Option& o = options[v][policy[v]];
      a(v, v) += 1;
      if (o.stop) {
        b[v] = o.payout;
        continue;
      }
      b[v] = o.reward;
      for (const auto& [t, p] : o.next) a(v, t) -= p;
    }
    auto x = solve_linear(std::move(a), std::move(b));
    if (!x) throw Error("policy evaluation system is singular");
    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      Rational current = option_value(options[v][policy[v]], *x);
      for (std::size_t k = 0; k < options[v].size(); ++k) {
        Rational candidate = option_value(options[v][k], *x);
        if (candidate < current) {
          current = std::move(candidate);
          policy[v] = k;
          changed = true;
        }
      }
    }
    if (!changed) return *x;
  }
}

}  // namespace

std::vector<Rational> p2_guarantee(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma) {
  if (spec.required_kind() != arena.colour_kind()) {
    throw KindMismatch("payoff " + spec.name() + " needs " + to_string(spec.required_kind()) + " colours");
  }
  switch (spec.kind) {
    case PayoffKind::Mean:
    case PayoffKind::Discounted:
    case PayoffKind::Parity:
    case PayoffKind::Limsup:
    case PayoffKind::Liminf:
    case PayoffKind::PositiveAverage:
    case PayoffKind::MeanCoBuchi:
    case PayoffKind::OptimisticGeneralizedMean: break;
    default: throw UnsupportedSpec("no exact P2 guarantee routine for payoff " + spec.name());
  }
  const Mdp mdp = freeze_sigma(arena, sigma);
  const std::size_t n = mdp.nodes.size();

  if (spec.kind == PayoffKind::Discounted) {
    std::vector<std::vector<Option>> options(n);
    for (NodeId v = 0; v < n; ++v) {
      const StateId s = mdp.nodes[v].state;
      for (const auto& act : mdp.actions[v]) {
        Option o;
        for (const auto& [a, w] : act.law) o.reward += w * std::get<DiscountedReward>(arena.colour(s, a)).value;
        for (const auto& e : act.edges) {
          o.next.push_back({e.target, e.prob * std::get<DiscountedReward>(arena.colour(e.pair)).discount});
        }
        options[v].push_back(std::move(o));
      }
    }
    return minimise(options);
  }

  const auto components = end_components(mdp);
  // Quotient: one node per component, then the remaining nodes.
  std::vector<NodeId> quotient(n, UINT32_MAX);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (const auto& [v, acts] : components[c]) quotient[v] = static_cast<NodeId>(c);
  }
  NodeId next_id = static_cast<NodeId>(components.size());
  for (NodeId v = 0; v < n; ++v) {
    if (quotient[v] == UINT32_MAX) quotient[v] = next_id++;
  }
  std::vector<std::vector<Option>> options(next_id);
  for (std::size_t c = 0; c < components.size(); ++c) {
    Option stop;
    stop.stop = true;
    stop.payout = component_value(arena, spec, mdp, components[c]);
    options[c].push_back(std::move(stop));
  }
  for (NodeId v = 0; v < n; ++v) {
    const NodeId q = quotient[v];
    const bool in_component = q < components.size();
    for (const auto& act : mdp.actions[v]) {
      std::map<NodeId, Rational> merged;
      bool leaves = false;
      for (const auto& e : act.edges) {
        merged[quotient[e.target]] += e.prob;
        if (quotient[e.target] != q) leaves = true;
      }
      // Actions kept inside a component are covered by its stop option.
      if (in_component && !leaves) continue;
      Option o;
      o.next.assign(merged.begin(), merged.end());
      options[q].push_back(std::move(o));
    }
  }
  const auto x = minimise(options);
  std::vector<Rational> out(n);
  for (NodeId v = 0; v < n; ++v) out[v] = x[quotient[v]];
  return out;
}

}  // namespace spg
