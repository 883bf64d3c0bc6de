#pragma once

#include "spg/arena.hpp"
#include "spg/random.hpp"
#include "spg/strategy.hpp"

#include <vector>

namespace spg {

/// s0 a1 s1 ... an sn. Plays are syntactic: each action must be available
/// at the state before it, successors need not have positive probability.
struct FinitePlay {
  std::vector<StateId> states;
  std::vector<ActionIndex> actions;

  StateId source() const { return states.front(); }
  StateId target() const { return states.back(); }
  std::size_t length() const { return actions.size(); }

  /// Throws ValidationError if the alternation or availability is broken.
  void validate(const Arena& arena) const;
  bool operator==(const FinitePlay&) const = default;
};

/// prefix . cycle^omega, where the cycle starts and ends at prefix.target()
/// and has at least one action.
struct LassoPlay {
  FinitePlay prefix;
  FinitePlay cycle;

  void validate(const Arena& arena) const;
  bool operator==(const LassoPlay&) const = default;
};

/// Samples `horizon` steps from `source`: actions from the owner's strategy
/// law, successors from the transition law. Deterministic given `rng`.
FinitePlay sample_play(const Arena& arena, const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau,
                       StateId source, std::size_t horizon, Rng& rng);

/// Index drawn from rational weights (summing to 1) using one uniform draw.
std::size_t sample_index(const std::vector<Rational>& weights, Rng& rng);

std::string describe(const Arena& arena, const FinitePlay& play);

}  // namespace spg
