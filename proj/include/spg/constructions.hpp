#pragma once

#include "spg/arena.hpp"
#include "spg/payoff.hpp"
#include "spg/play.hpp"
#include "spg/strategy.hpp"
#include "spg/word.hpp"

#include <optional>
#include <vector>

namespace spg {

/// Guaranteed value of sigma from every (memory, state), indexed
/// m * num_states + s: inf over P2 strategies of the expected payoff when
/// play starts at s with sigma's memory set to m. For shift-invariant f the
/// value of sigma after a history h depends on h only through the memory
/// state reached and the current state, so this table is the whole story.
///
/// Needs a payoff where both players are positional; the inf is then attained
/// by a pure P2 strategy on states x sigma-memory and is computed exactly by
/// policy iteration (see p2_guarantee).
std::vector<Rational> product_values(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma);

/// (memory, state) pairs reachable from (initial memory, any state) under
/// sigma's support and every P2 action.
std::vector<bool> reachable_pairs(const Arena& arena, const FiniteMemoryStrategy& sigma);

struct WeaknessSet {
  Rational epsilon;
  /// Indexed m * num_states + s.
  std::vector<bool> weak;
  std::vector<Rational> guaranteed;
  std::vector<Rational> values;

  bool contains(FiniteMemoryStrategy::Memory m, StateId s) const { return weak[m * values.size() + s]; }
  bool empty() const;
};

/// (m, s) is weak iff its guaranteed value is < val(s) - 2 epsilon.
WeaknessSet weakness_set(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const Rational& epsilon, const std::vector<Rational>& values);
/// Same, with val computed by brute_force_value.
WeaknessSet weakness_set(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const Rational& epsilon);

/// sigma with its memory sent back to the initial state whenever a step
/// lands on a weak (memory, state). The reset is applied once per step.
FiniteMemoryStrategy reset_strategy(const Arena& arena, const FiniteMemoryStrategy& sigma, const WeaknessSet& weak);

/// Split of the actions at a P1 state into two non-empty halves.
struct PartitionAtState {
  StateId pivot = 0;
  std::vector<ActionIndex> side0;
  std::vector<ActionIndex> side1;

  /// Throws ValidationError unless the halves are disjoint, cover the
  /// available actions, are non-empty, and the pivot belongs to P1.
  void validate(const Arena& arena) const;
  int side_of(ActionIndex a) const;
  /// The sub-arena keeping only side `j` at the pivot.
  Arena sub_arena(const Arena& arena, int j) const;
};

/// P2 strategy following tau_j after the last pivot visit left through an
/// action of side j. Memory is (side, tau0 memory, tau1 memory); a step only
/// advances the automaton of the side it belongs to, so tau_j reads exactly
/// its projected history. Both tau_j are written against the full arena.
FiniteMemoryStrategy trigger_strategy(const Arena& arena, const FiniteMemoryStrategy& tau0,
                                      const FiniteMemoryStrategy& tau1, const PartitionAtState& split);

/// One step of a play: the action taken and the state reached.
struct Transition {
  ActionIndex action = 0;
  StateId target = 0;
  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

using TransitionWord = LassoWord<Transition>;

std::vector<Transition> transitions_of(const FinitePlay& play);

/// Side of every transition of a finite play from the pivot: the side of
/// the last action played at the pivot.
std::vector<int> transition_sides(const FinitePlay& play, const PartitionAtState& split);

/// pi_j of a finite play from the pivot.
FinitePlay project(const FinitePlay& play, const PartitionAtState& split, int side);

struct ProjectedLasso {
  /// Set when the projection is infinite.
  std::optional<LassoPlay> lasso;
  /// The whole projection when it is finite.
  FinitePlay finite;
  bool is_finite() const { return !lasso.has_value(); }
};

/// pi_j of an infinite play prefix.cycle^omega from the pivot.
ProjectedLasso project(const LassoPlay& play, const PartitionAtState& split, int side);

/// Factorisation of a lasso play into side-0 and side-1 blocks as a
/// ShufflePattern (u = side 0, v = side 1), together with the play's
/// transition word in the matching lasso shape.
struct Factorisation {
  TransitionWord word;
  ShufflePattern pattern;
};
Factorisation factorise(const LassoPlay& play, const PartitionAtState& split);

TransitionWord transition_word(const LassoPlay& play);

}  // namespace spg
