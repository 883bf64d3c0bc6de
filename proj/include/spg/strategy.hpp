#pragma once

#include "spg/arena.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spg {

/// Probability distribution over the actions available at one state.
using ActionDistribution = std::vector<std::pair<ActionIndex, Rational>>;

/// Deterministic choice depending only on the current state. Entries for
/// states of the other player are empty.
struct PureStationaryStrategy {
  Player player = Player::P1;
  std::vector<std::optional<ActionIndex>> choice;

  ActionIndex at(StateId s) const { return *choice.at(s); }
  bool operator==(const PureStationaryStrategy&) const = default;
};

/// Decodes the `index`-th pure stationary strategy of `player` in mixed
/// radix order (first owned state varies fastest).
PureStationaryStrategy pure_strategy_from_index(const Arena& arena, Player player, std::uint64_t index);

/// Memory automaton strategy. At a history ending in state s with memory m
/// the owner plays `choice(m, s)`; after a step (s, a, s') every strategy's
/// memory moves to `update(m, s, a, s')`, whoever owned s. The initial
/// memory is the same for every start state.
class FiniteMemoryStrategy {
 public:
  using Memory = std::uint32_t;
  static constexpr Memory kUnset = UINT32_MAX;

  FiniteMemoryStrategy() = default;
  FiniteMemoryStrategy(const Arena& arena, Player player, std::vector<std::string> memory_names, Memory initial = 0);

  /// One memory state; update is the identity.
  static FiniteMemoryStrategy from_pure(const Arena& arena, const PureStationaryStrategy& pure);

  Player player() const { return player_; }
  std::size_t memory_size() const { return memory_names_.size(); }
  Memory initial() const { return initial_; }
  const std::string& memory_name(Memory m) const { return memory_names_[m]; }
  const std::vector<std::string>& memory_names() const { return memory_names_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_pairs() const { return num_pairs_; }

  void set_update(Memory from, PairIndex pair, StateId next, Memory to);
  /// Sets every update entry from `fn(memory, pair, next)`.
  void set_updates(const std::function<Memory(Memory, PairIndex, StateId)>& fn);
  /// Throws ValidationError when the entry was never set.
  Memory update(Memory from, PairIndex pair, StateId next) const;
  Memory raw_update(Memory from, PairIndex pair, StateId next) const {
    return update_[(static_cast<std::size_t>(from) * num_pairs_ + pair) * num_states_ + next];
  }

  void set_choice(Memory m, StateId s, ActionDistribution dist);
  void set_pure_choice(Memory m, StateId s, ActionIndex a) { set_choice(m, s, {{a, Rational(1)}}); }
  const ActionDistribution& choice(Memory m, StateId s) const {
    return choice_[static_cast<std::size_t>(m) * num_states_ + s];
  }

  bool is_pure() const;

  /// Checks that the update is total on (memory, pair, successor in the
  /// support), that every owned (memory, state) has a distribution summing
  /// to 1 over available actions, and that no other state has one.
  void validate(const Arena& arena) const;

  bool operator==(const FiniteMemoryStrategy&) const = default;

 private:
  Player player_ = Player::P1;
  std::vector<std::string> memory_names_;
  Memory initial_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_pairs_ = 0;
  std::vector<Memory> update_;
  std::vector<ActionDistribution> choice_;
};

/// Strategy documents. A pure stationary strategy is a bare
/// {"state": "action"} map. A finite-memory one is
///   {"player": "P1", "memory_states": [...], "initial": "m0",
///    "update": [{"from","state"?,"action"?,"next"?,"to"}...],
///    "choice": [{"memory","state","action"} | {"memory","state","distribution":{a: "p"}}]}
/// Update rules are tried in order; omitted fields match anything and a
/// transition matched by no rule keeps its memory state. `player` is
/// required only for memory strategies; a bare map takes the owner of its
/// states (it must not mix owners).
FiniteMemoryStrategy strategy_from_json(const Arena& arena, const nlohmann::json& doc);
FiniteMemoryStrategy load_strategy(const Arena& arena, const std::string& path);
nlohmann::json strategy_to_json(const Arena& arena, const FiniteMemoryStrategy& strategy);
nlohmann::json pure_strategy_to_json(const Arena& arena, const PureStationaryStrategy& strategy);

/// Strategy for `player` with no choices to make beyond the first action of
/// each owned state. Used where a player owns no state.
PureStationaryStrategy first_action_strategy(const Arena& arena, Player player);

}  // namespace spg
