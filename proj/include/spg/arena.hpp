#pragma once

#include "spg/colour.hpp"
#include "spg/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spg {

enum class Player { P1, P2 };

std::string to_string(Player player);

using StateId = std::uint32_t;
/// Index of an action within the available list of its state.
using ActionIndex = std::uint32_t;
/// Dense index of a (state, action) pair across the whole arena.
using PairIndex = std::uint32_t;

struct Successor {
  StateId state = 0;
  Rational prob;
};

struct ActionEntry {
  std::string name;
  ColourToken colour;
  std::vector<Successor> successors;
};

struct StateEntry {
  std::string name;
  Player owner = Player::P1;
  std::vector<ActionEntry> actions;
};

/// Finite perfect-information stochastic arena with a colouring of its
/// (state, action) pairs. Immutable once built; `Arena::build` validates:
///  - every state has at least one action, names are unique;
///  - every successor distribution has entries in [0,1] summing exactly to 1;
///  - all colours share one kind (and one dimension for vectors).
class Arena {
 public:
  static Arena build(std::vector<StateEntry> states);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_pairs() const { return pair_state_.size(); }

  const StateEntry& state(StateId s) const { return states_[s]; }
  const std::string& state_name(StateId s) const { return states_[s].name; }
  Player owner(StateId s) const { return states_[s].owner; }
  std::size_t num_actions(StateId s) const { return states_[s].actions.size(); }
  const ActionEntry& action(StateId s, ActionIndex a) const { return states_[s].actions[a]; }
  const std::vector<StateEntry>& states() const { return states_; }

  PairIndex pair_index(StateId s, ActionIndex a) const { return pair_offset_[s] + a; }
  StateId pair_state(PairIndex p) const { return pair_state_[p]; }
  ActionIndex pair_action(PairIndex p) const { return p - pair_offset_[pair_state_[p]]; }
  const ColourToken& colour(PairIndex p) const { return action(pair_state(p), pair_action(p)).colour; }
  const ColourToken& colour(StateId s, ActionIndex a) const { return action(s, a).colour; }

  /// p(s, a)(t); zero when t is not listed.
  Rational probability(StateId s, ActionIndex a, StateId t) const;

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<ActionIndex> find_action(StateId s, std::string_view name) const;

  ColourKind colour_kind() const { return kind_; }
  std::size_t colour_dimension() const { return dimension_; }

  /// Copy of the arena where state `s` keeps only the actions in `keep`
  /// (given as indices of the original arena, in increasing order).
  Arena restrict_actions(StateId s, const std::vector<ActionIndex>& keep) const;

  /// Same structure with every colour replaced by `recolour(pair)`.
  template <class F>
  Arena recoloured(F&& recolour) const {
    auto states = states_;
    for (StateId s = 0; s < states.size(); ++s) {
      for (ActionIndex a = 0; a < states[s].actions.size(); ++a) {
        states[s].actions[a].colour = recolour(pair_index(s, a));
      }
    }
    return build(std::move(states));
  }

  /// Number of pure stationary profiles restricted to `player`'s states.
  /// Saturates at UINT64_MAX.
  std::uint64_t count_pure_stationary(Player player) const;

  bool operator==(const Arena& other) const;

 private:
  std::vector<StateEntry> states_;
  std::vector<PairIndex> pair_offset_;
  std::vector<StateId> pair_state_;
  ColourKind kind_ = ColourKind::Reward;
  std::size_t dimension_ = 0;
};

/// Parses the JSON game document. Syntax errors carry line/column; model
/// violations are reported as ValidationError naming the invariant.
Arena parse_arena(std::string_view text);
Arena load_arena(const std::string& path);

/// Emits the document with states and actions in declaration order.
std::string print_arena(const Arena& arena);

/// Stable 64-bit fingerprint of the printed document (FNV-1a).
std::string fingerprint(const Arena& arena);

struct RandomArenaParams {
  std::size_t num_states = 4;
  std::size_t max_actions = 3;
  long colour_min = -2;
  long colour_max = 2;
  /// Probability that a state is included in a transition support.
  Rational density = Rational(1, 2);
  std::uint64_t seed = 0;
  ColourKind kind = ColourKind::Reward;
  /// Vector dimension when kind == Vector.
  std::size_t dimension = 2;
  /// Discount attached to every colour when kind == Discounted.
  Rational discount = Rational(1, 2);
};

struct RandomArena {
  Arena arena;
  /// One line per parameter that had to be clamped.
  std::vector<std::string> clamped;
};

/// Deterministic in its parameters. The transition structure depends only
/// on (num_states, max_actions, density, seed); colours are drawn from a
/// separate stream so the same seed gives the same shape for every kind.
RandomArena random_arena(RandomArenaParams params);

/// Corpus entry `index` of a seeded family of small arenas: 1..max_states
/// states and 1..max_actions actions per state.
RandomArenaParams corpus_params(std::uint64_t root_seed, std::uint64_t index, std::size_t max_states,
                                std::size_t max_actions, ColourKind kind);

}  // namespace spg
