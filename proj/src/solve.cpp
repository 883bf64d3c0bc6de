#include "spg/solve.hpp"

#include "spg/errors.hpp"
#include "spg/linalg.hpp"
#include "spg/random.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace spg {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Rational> node_values(const Arena& arena, const PayoffSpec& spec, const InducedChain& chain) {
  if (spec.required_kind() != arena.colour_kind()) {
    throw KindMismatch("payoff " + spec.name() + " needs " + to_string(spec.required_kind()) + " colours, arena has " +
                       to_string(arena.colour_kind()));
  }
  if (spec.kind == PayoffKind::Discounted) return discounted_values(arena, chain);
  if (!spec.is_class_determined()) {
    throw UnsupportedSpec("payoff " + spec.name() +
                          " is not evaluated on induced chains; use the dedicated verify routines");
  }
  const auto classes = bottom_sccs(arena, chain);
  std::vector<Rational> out(chain.size(), Rational(0));
  std::vector<bool> fixed(chain.size(), false);
  for (const auto& cls : classes) {
    const Rational v = class_value(spec, cls);
    for (NodeId n : cls.nodes) {
      out[n] = v;
      fixed[n] = true;
    }
  }
  std::vector<std::size_t> local(chain.size(), SIZE_MAX);
  std::vector<NodeId> transient;
  for (NodeId n = 0; n < chain.size(); ++n) {
    if (!fixed[n]) {
      local[n] = transient.size();
      transient.push_back(n);
    }
  }
  if (transient.empty()) return out;
  // x_T = P_TT x_T + P_TC v_C
  const std::size_t k = transient.size();
  RationalMatrix a(k, k);
  std::vector<Rational> b(k, Rational(0));
  for (std::size_t i = 0; i < k; ++i) {
    a(i, i) += 1;
    for (const auto& [t, p] : chain.rows[transient[i]]) {
      if (local[t] != SIZE_MAX) {
        a(i, local[t]) -= p;
      } else {
        b[i] += p * out[t];
      }
    }
  }
  auto x = solve_linear(std::move(a), std::move(b));
  if (!x) throw Error("transient system is singular");
  for (std::size_t i = 0; i < k; ++i) out[transient[i]] = (*x)[i];
  return out;
}

Rational expected_payoff(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const FiniteMemoryStrategy& tau, StateId source) {
  const auto chain = induce_chain(arena, sigma, tau);
  return node_values(arena, spec, chain)[chain.node(source, sigma.initial(), tau.initial())];
}

std::vector<Rational> profile_values(const Arena& arena, const PayoffSpec& spec, const PureStationaryStrategy& sigma,
                                     const PureStationaryStrategy& tau) {
  const auto chain =
      induce_chain(arena, FiniteMemoryStrategy::from_pure(arena, sigma), FiniteMemoryStrategy::from_pure(arena, tau));
  // Single memory on both sides, so node id == state id.
  return node_values(arena, spec, chain);
}

namespace {

void require_both_positional(const PayoffSpec& spec, const char* what) {
  if (!spec.is_both_positional()) {
    throw UnsupportedSpec(std::string(what) + " needs a payoff where both players have positional optimal strategies "
                          "(mean, discounted, parity, limsup, liminf); got " + spec.name());
  }
}

}  // namespace

BestResponse best_response_min(const Arena& arena, const PayoffSpec& spec, const PureStationaryStrategy& sigma,
                               std::uint64_t budget) {
  require_both_positional(spec, "best_response_min");
  const std::uint64_t count = arena.count_pure_stationary(Player::P2);
  if (count > budget) {
    throw BudgetExceeded("P2 has " + std::to_string(count) + " pure stationary strategies, budget is " +
                         std::to_string(budget));
  }
  std::vector<std::vector<Rational>> grid(count);
  parallel_for(count, [&](std::size_t j) {
    grid[j] = profile_values(arena, spec, sigma, pure_strategy_from_index(arena, Player::P2, j));
  });
  BestResponse out;
  out.enumerated = count;
  const std::size_t n = arena.num_states();
  out.values = grid[0];
  std::vector<std::size_t> arg(n, 0);
  for (std::size_t j = 1; j < count; ++j) {
    for (std::size_t s = 0; s < n; ++s) {
      if (grid[j][s] < out.values[s]) {
        out.values[s] = grid[j][s];
        arg[s] = j;
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s) out.per_state_tau.push_back(pure_strategy_from_index(arena, Player::P2, arg[s]));
  for (std::size_t j = 0; j < count; ++j) {
    if (grid[j] == out.values) {
      out.uniform_tau = pure_strategy_from_index(arena, Player::P2, j);
      break;
    }
  }
  return out;
}

ValueVector brute_force_value(const Arena& arena, const PayoffSpec& spec, std::uint64_t budget) {
  require_both_positional(spec, "brute_force_value");
  const std::uint64_t c1 = arena.count_pure_stationary(Player::P1);
  const std::uint64_t c2 = arena.count_pure_stationary(Player::P2);
  if (c1 == UINT64_MAX || c2 == UINT64_MAX || (c2 != 0 && c1 > budget / c2)) {
    throw BudgetExceeded("pure stationary profile grid exceeds the budget of " + std::to_string(budget) +
                         " pairs; split the arena or raise the budget");
  }
  const std::size_t n = arena.num_states();
  std::vector<std::vector<std::vector<Rational>>> grid(c1, std::vector<std::vector<Rational>>(c2));
  parallel_for(c1, [&](std::size_t i) {
    const auto sigma = pure_strategy_from_index(arena, Player::P1, i);
    for (std::size_t j = 0; j < c2; ++j) {
      grid[i][j] = profile_values(arena, spec, sigma, pure_strategy_from_index(arena, Player::P2, j));
    }
  });

  std::vector<std::vector<Rational>> row_min(c1, std::vector<Rational>(n));
  std::vector<std::vector<Rational>> col_max(c2, std::vector<Rational>(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < c1; ++i) {
      row_min[i][s] = grid[i][0][s];
      for (std::size_t j = 1; j < c2; ++j) row_min[i][s] = std::min(row_min[i][s], grid[i][j][s]);
    }
    for (std::size_t j = 0; j < c2; ++j) {
      col_max[j][s] = grid[0][j][s];
      for (std::size_t i = 1; i < c1; ++i) col_max[j][s] = std::max(col_max[j][s], grid[i][j][s]);
    }
  }
  ValueVector out;
  out.spec = spec;
  out.arena_fingerprint = fingerprint(arena);
  out.profiles = c1 * c2;
  out.values.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    Rational maxmin = row_min[0][s];
    for (std::size_t i = 1; i < c1; ++i) maxmin = std::max(maxmin, row_min[i][s]);
    Rational minmax = col_max[0][s];
    for (std::size_t j = 1; j < c2; ++j) minmax = std::min(minmax, col_max[j][s]);
    if (maxmin != minmax) {
      throw Error("saddle point fails at state " + arena.state_name(s) + ": maxmin " + to_string(maxmin) +
                  " != minmax " + to_string(minmax));
    }
    out.values[s] = maxmin;
  }
  std::optional<std::size_t> star;
  for (std::size_t i = 0; i < c1 && !star; ++i) {
    if (row_min[i] == out.values) star = i;
  }
  if (!star) throw Error("no single pure stationary strategy of P1 is optimal at every state");
  out.sigma_star = pure_strategy_from_index(arena, Player::P1, *star);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < c2; ++j) {
      if (grid[*star][j][s] == out.values[s]) {
        out.certificate_tau.push_back(pure_strategy_from_index(arena, Player::P2, j));
        out.certificate_value.push_back(grid[*star][j][s]);
        break;
      }
    }
  }
  return out;
}

ActionClassification classify_actions(const Arena& arena, const std::vector<Rational>& values) {
  if (values.size() != arena.num_states()) throw ValidationError("value vector does not cover the arena");
  ActionClassification out;
  out.actions.resize(arena.num_pairs());
  out.all_value_preserving.assign(arena.num_states(), true);
  for (StateId s = 0; s < arena.num_states(); ++s) {
    for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
      ActionClass& c = out.actions[arena.pair_index(s, a)];
      c.state = s;
      c.action = a;
      c.expected_value = 0;
      c.stable = true;
      for (const auto& succ : arena.action(s, a).successors) {
        if (sgn(succ.prob) == 0) continue;
        c.expected_value += succ.prob * values[succ.state];
        c.successor_values.push_back(values[succ.state]);
        if (values[succ.state] != values[s]) c.stable = false;
      }
      std::sort(c.successor_values.begin(), c.successor_values.end());
      c.successor_values.erase(std::unique(c.successor_values.begin(), c.successor_values.end()),
                               c.successor_values.end());
      c.value_preserving = c.expected_value == values[s];
      if (c.stable && !c.value_preserving) throw Error("stable action that is not value-preserving");
      if (!c.value_preserving) out.all_value_preserving[s] = false;
    }
  }
  return out;
}

bool is_locally_optimal(const Arena& arena, const ActionClassification& cls, const FiniteMemoryStrategy& strategy) {
  for (FiniteMemoryStrategy::Memory m = 0; m < strategy.memory_size(); ++m) {
    for (StateId s = 0; s < arena.num_states(); ++s) {
      if (arena.owner(s) != strategy.player()) continue;
      for (const auto& [a, w] : strategy.choice(m, s)) {
        if (sgn(w) > 0 && !cls.at(arena, s, a).value_preserving) return false;
      }
    }
  }
  return true;
}

MartingaleReport martingale_check(const Arena& arena, const std::vector<Rational>& values,
                                  const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau, StateId source) {
  const auto cls = classify_actions(arena, values);
  const auto chain = induce_chain(arena, sigma, tau);
  const auto reach = chain.reachable_from(chain.node(source, sigma.initial(), tau.initial()));
  MartingaleReport out;
  for (NodeId n = 0; n < chain.size(); ++n) {
    if (!reach[n]) continue;
    const StateId s = chain.nodes[n].state;
    if (arena.owner(s) != Player::P1) continue;
    for (const auto& [a, w] : chain.action_weights[n]) {
      if (sgn(w) > 0 && !cls.at(arena, s, a).value_preserving) {
        throw PreconditionError("sigma is not locally optimal: action " + arena.action(s, a).name + " at state " +
                                arena.state_name(s) + " (memory " + sigma.memory_name(chain.nodes[n].m1) +
                                ") has expected successor value " + to_string(cls.at(arena, s, a).expected_value) +
                                " but val = " + to_string(values[s]));
      }
    }
  }
  for (NodeId n = 0; n < chain.size(); ++n) {
    if (!reach[n]) continue;
    ++out.nodes_checked;
    Rational next = 0;
    for (const auto& [t, p] : chain.rows[n]) next += p * values[chain.nodes[t].state];
    const Rational& now = values[chain.nodes[n].state];
    if (next > now) out.strict.push_back({n, now, next});
    if (next < now) out.violations.push_back({n, now, next});
  }
  return out;
}

McEstimate stopped_value_mc(const Arena& arena, const std::vector<Rational>& values, const FiniteMemoryStrategy& sigma,
                            const FiniteMemoryStrategy& tau, StateId source, const StoppingRule& rule,
                            std::size_t runs, std::uint64_t seed, double alpha) {
  if (runs == 0) throw ValidationError("stopped_value_mc needs at least one run");
  const auto chain = induce_chain(arena, sigma, tau);
  const auto classes = bottom_sccs(arena, chain);
  std::vector<bool> in_class(chain.size(), false);
  for (const auto& c : classes) {
    for (NodeId n : c.nodes) in_class[n] = true;
  }
  // Cumulative double weights per node for sampling.
  std::vector<std::vector<double>> cdf(chain.size());
  for (NodeId n = 0; n < chain.size(); ++n) {
    double acc = 0;
    for (const auto& [t, p] : chain.rows[n]) {
      acc += to_double(p);
      cdf[n].push_back(acc);
    }
  }
  std::vector<double> val(arena.num_states());
  double lo = 0, hi = 0;
  for (StateId s = 0; s < arena.num_states(); ++s) {
    val[s] = to_double(values[s]);
    if (s == 0 || val[s] < lo) lo = val[s];
    if (s == 0 || val[s] > hi) hi = val[s];
  }
  auto stops = [&](NodeId n, std::size_t step) {
    const auto& node = chain.nodes[n];
    switch (rule.kind) {
      case StoppingRule::Kind::FirstHit: return static_cast<bool>(rule.states.at(node.state));
      case StoppingRule::Kind::Horizon: return step >= rule.horizon;
      case StoppingRule::Kind::FirstWeakness:
        return static_cast<bool>(rule.weak.at(static_cast<std::size_t>(node.m1) * arena.num_states() + node.state));
    }
    return true;
  };
  Rng rng(seed);
  McEstimate out;
  out.alpha = alpha;
  out.runs = runs;
  // Stopping states are counted so that a deterministic outcome reproduces
  // its value exactly.
  std::vector<std::size_t> stopped_at(arena.num_states(), 0);
  constexpr std::size_t kStepCap = 1'000'000;
  for (std::size_t r = 0; r < runs; ++r) {
    NodeId n = chain.node(source, sigma.initial(), tau.initial());
    std::size_t step = 0;
    while (!stops(n, step)) {
      // Beyond a bottom class entry the value process is frozen at its
      // a.s. limit, except under a horizon rule which reads S_N itself.
      if (rule.kind != StoppingRule::Kind::Horizon && in_class[n]) {
        ++out.absorbed;
        break;
      }
      if (step >= kStepCap) throw Error("stopped_value_mc: run exceeded the step cap");
      const double u = uniform_unit(rng) * cdf[n].back();
      const auto it = std::upper_bound(cdf[n].begin(), cdf[n].end(), u);
      const std::size_t k = std::min<std::size_t>(it - cdf[n].begin(), cdf[n].size() - 1);
      n = chain.rows[n][k].first;
      ++step;
    }
    ++stopped_at[chain.nodes[n].state];
  }
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (stopped_at[s]) out.mean += static_cast<double>(stopped_at[s]) / static_cast<double>(runs) * val[s];
  }
  out.half_width = (hi - lo) * std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(runs)));
  return out;
}

}  // namespace spg
