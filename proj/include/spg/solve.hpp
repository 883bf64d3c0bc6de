#pragma once

#include "spg/arena.hpp"
#include "spg/chain.hpp"
#include "spg/payoff.hpp"
#include "spg/strategy.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace spg {

inline constexpr std::uint64_t kDefaultPairBudget = 2'000'000;

/// Expected payoff from every node of the chain. Discounted specs solve the
/// discounted system; class-determined specs weight class values by
/// absorption probabilities. Other specs throw UnsupportedSpec.
std::vector<Rational> node_values(const Arena& arena, const PayoffSpec& spec, const InducedChain& chain);

/// E^{sigma,tau}_source[f], exact.
Rational expected_payoff(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const FiniteMemoryStrategy& tau, StateId source);

/// Values of a pure stationary profile at every arena state.
std::vector<Rational> profile_values(const Arena& arena, const PayoffSpec& spec, const PureStationaryStrategy& sigma,
                                     const PureStationaryStrategy& tau);

struct BestResponse {
  /// Per-state infimum over the enumerated pure stationary tau.
  std::vector<Rational> values;
  /// A minimiser for each state.
  std::vector<PureStationaryStrategy> per_state_tau;
  /// Set when one tau attains the minimum at every state.
  std::optional<PureStationaryStrategy> uniform_tau;
  std::uint64_t enumerated = 0;
};

/// Exhaustive pure stationary best response of P2 against a pure stationary
/// sigma. Only for mean, discounted, parity, limsup and liminf.
BestResponse best_response_min(const Arena& arena, const PayoffSpec& spec, const PureStationaryStrategy& sigma,
                               std::uint64_t budget = kDefaultPairBudget);

struct ValueVector {
  PayoffSpec spec;
  std::string arena_fingerprint;
  std::vector<Rational> values;
  PureStationaryStrategy sigma_star;
  /// Minimising tau against sigma_star for each state, and what it achieves.
  std::vector<PureStationaryStrategy> certificate_tau;
  std::vector<Rational> certificate_value;
  std::uint64_t profiles = 0;
};

/// Values by enumerating all pure stationary profiles. Checks that
/// max_sigma min_tau equals min_tau max_sigma at every state and that one
/// sigma attains the max everywhere; either failure throws Error.
ValueVector brute_force_value(const Arena& arena, const PayoffSpec& spec, std::uint64_t budget = kDefaultPairBudget);

struct ActionClass {
  StateId state = 0;
  ActionIndex action = 0;
  /// sum_t p(s,a,t) val(t)
  Rational expected_value;
  /// Values of the successors with positive probability, ascending, unique.
  std::vector<Rational> successor_values;
  bool value_preserving = false;
  bool stable = false;
};

struct ActionClassification {
  /// Indexed by PairIndex.
  std::vector<ActionClass> actions;
  /// Every action available at the state is value-preserving.
  std::vector<bool> all_value_preserving;

  const ActionClass& at(const Arena& arena, StateId s, ActionIndex a) const { return actions[arena.pair_index(s, a)]; }
};

ActionClassification classify_actions(const Arena& arena, const std::vector<Rational>& values);

/// P1 strategy whose support is value-preserving in every memory state.
bool is_locally_optimal(const Arena& arena, const ActionClassification& cls, const FiniteMemoryStrategy& strategy);

struct MartingaleNode {
  NodeId node = 0;
  Rational value;
  Rational expected_next;
};

struct MartingaleReport {
  std::size_t nodes_checked = 0;
  /// Nodes where E[val(next)] > val(current).
  std::vector<MartingaleNode> strict;
  /// Nodes where E[val(next)] < val(current); empty for a valid sigma.
  std::vector<MartingaleNode> violations;

  bool is_martingale() const { return strict.empty() && violations.empty(); }
  bool is_submartingale() const { return violations.empty(); }
};

/// One-step check of E[val(S_{n+1}) | node] against val(S_n) on every node
/// reachable from `source`. Throws PreconditionError naming the first
/// reachable non-value-preserving action of sigma.
MartingaleReport martingale_check(const Arena& arena, const std::vector<Rational>& values,
                                  const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau, StateId source);

struct StoppingRule {
  enum class Kind { FirstHit, Horizon, FirstWeakness };
  Kind kind = Kind::Horizon;
  /// FirstHit: target states.
  std::vector<bool> states;
  std::size_t horizon = 0;
  /// FirstWeakness: flags indexed m * num_states + s over sigma's memory.
  std::vector<bool> weak;

  static StoppingRule first_hit(std::vector<bool> states) { return {Kind::FirstHit, std::move(states), 0, {}}; }
  static StoppingRule at_horizon(std::size_t n) { return {Kind::Horizon, {}, n, {}}; }
  static StoppingRule first_weakness(std::vector<bool> weak) { return {Kind::FirstWeakness, {}, 0, std::move(weak)}; }
};

struct McEstimate {
  double mean = 0;
  /// Hoeffding half-width at confidence 1 - alpha.
  double half_width = 0;
  double alpha = 0.01;
  std::size_t runs = 0;
  /// Runs that entered a bottom class before stopping; their value is the
  /// value at the entry node.
  std::size_t absorbed = 0;

  // The slack absorbs rounding in the double-precision running sum.
  bool covers(double x) const {
    const double w = half_width + 1e-9 * (1 + std::abs(x));
    return mean - w <= x && x <= mean + w;
  }
};

/// Monte Carlo estimate of E[val(S_T)] for the stopping rule.
McEstimate stopped_value_mc(const Arena& arena, const std::vector<Rational>& values, const FiniteMemoryStrategy& sigma,
                            const FiniteMemoryStrategy& tau, StateId source, const StoppingRule& rule,
                            std::size_t runs, std::uint64_t seed, double alpha = 0.01);

/// Runs `body(i)` for i in [0, n) on up to hardware_concurrency threads.
/// Callers write results into pre-sized slots, so the merge order is fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace spg
