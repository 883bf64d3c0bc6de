#pragma once

#include "spg/arena.hpp"
#include "spg/constructions.hpp"
#include "spg/mdp.hpp"
#include "spg/payoff.hpp"
#include "spg/random.hpp"
#include "spg/solve.hpp"

#include <optional>

namespace spg::testing {

inline constexpr std::uint64_t kCorpusSeed = 20240601;

/// Entry `i` of the shared random corpus: 1..4 states, 1..3 actions,
/// colours in -2..2. The transition structure does not depend on `kind`.
inline Arena corpus_arena(std::uint64_t i, ColourKind kind, std::size_t dimension = 2) {
  auto p = corpus_params(kCorpusSeed, i, 4, 3, kind);
  p.dimension = dimension;
  return random_arena(p).arena;
}

inline Arena corpus_arena(std::uint64_t i, const PayoffSpec& spec) {
  return corpus_arena(i, spec.required_kind(), spec.dimension == 0 ? 2 : spec.dimension);
}

/// Pure stationary strategy choosing uniformly among value-preserving
/// actions.
inline PureStationaryStrategy random_preserving(const Arena& arena, const ActionClassification& cls, Player player,
                                                Rng& rng) {
  PureStationaryStrategy out{player, std::vector<std::optional<ActionIndex>>(arena.num_states())};
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (arena.owner(s) != player) continue;
    std::vector<ActionIndex> pool;
    for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
      if (cls.at(arena, s, a).value_preserving) pool.push_back(a);
    }
    out.choice[s] = pool.at(uniform_below(rng, pool.size()));
  }
  return out;
}

/// Two-memory P1 strategy: memory 0 plays sigma*, memory 1 plays random
/// value-preserving actions, memory moves at random. Redrawn until it is
/// epsilon-optimal from memory 0; draws with a non-empty weakness set are
/// preferred. Locally optimal by construction.
inline FiniteMemoryStrategy weakened_base(const Arena& arena, const PayoffSpec& spec, const ValueVector& value,
                                          const Rational& epsilon, Rng& rng, std::size_t attempts = 40) {
  const auto cls = classify_actions(arena, value.values);
  const std::size_t n = arena.num_states();
  std::optional<FiniteMemoryStrategy> fallback;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    FiniteMemoryStrategy sigma(arena, Player::P1, {"m0", "m1"}, 0);
    const auto other = random_preserving(arena, cls, Player::P1, rng);
    for (StateId s = 0; s < n; ++s) {
      if (arena.owner(s) != Player::P1) continue;
      sigma.set_pure_choice(0, s, value.sigma_star.at(s));
      sigma.set_pure_choice(1, s, other.at(s));
    }
    for (FiniteMemoryStrategy::Memory m = 0; m < 2; ++m) {
      for (PairIndex p = 0; p < arena.num_pairs(); ++p) {
        for (StateId t = 0; t < n; ++t) sigma.set_update(m, p, t, uniform_below(rng, 4) == 0 ? 1 : 0);
      }
    }
    const auto g = p2_guarantee(arena, spec, sigma);
    bool ok = true;
    for (StateId s = 0; s < n; ++s) ok = ok && g[s] >= value.values[s] - epsilon;
    if (!ok) continue;
    if (!weakness_set(arena, spec, sigma, epsilon, value.values).empty()) return sigma;
    if (!fallback) fallback = sigma;
  }
  if (fallback) return *fallback;
  return FiniteMemoryStrategy::from_pure(arena, value.sigma_star);
}

}  // namespace spg::testing
