#include "spg/constructions.hpp"

#include "spg/errors.hpp"
#include "spg/mdp.hpp"
#include "spg/solve.hpp"

#include <algorithm>

namespace spg {

std::vector<Rational> product_values(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma) {
  if (!spec.is_both_positional()) {
    throw UnsupportedSpec("product_values needs mean, discounted, parity, limsup or liminf; got " + spec.name());
  }
  if (sigma.player() != Player::P1) throw ValidationError("product_values expects a P1 strategy");
  return p2_guarantee(arena, spec, sigma);
}

std::vector<bool> reachable_pairs(const Arena& arena, const FiniteMemoryStrategy& sigma) {
  const std::size_t n = arena.num_states();
  std::vector<bool> seen(n * sigma.memory_size(), false);
  std::vector<std::pair<FiniteMemoryStrategy::Memory, StateId>> stack;
  for (StateId s = 0; s < n; ++s) {
    seen[sigma.initial() * n + s] = true;
    stack.push_back({sigma.initial(), s});
  }
  while (!stack.empty()) {
    const auto [m, s] = stack.back();
    stack.pop_back();
    std::vector<ActionIndex> acts;
    if (arena.owner(s) == sigma.player()) {
      for (const auto& [a, w] : sigma.choice(m, s)) {
        if (sgn(w) > 0) acts.push_back(a);
      }
    } else {
      for (ActionIndex a = 0; a < arena.num_actions(s); ++a) acts.push_back(a);
    }
    for (ActionIndex a : acts) {
      const PairIndex pair = arena.pair_index(s, a);
      for (const auto& succ : arena.action(s, a).successors) {
        if (sgn(succ.prob) == 0) continue;
        const auto next = sigma.update(m, pair, succ.state);
        const std::size_t key = next * n + succ.state;
        if (!seen[key]) {
          seen[key] = true;
          stack.push_back({next, succ.state});
        }
      }
    }
  }
  return seen;
}

bool WeaknessSet::empty() const { return std::none_of(weak.begin(), weak.end(), [](bool b) { return b; }); }

WeaknessSet weakness_set(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const Rational& epsilon, const std::vector<Rational>& values) {
  if (values.size() != arena.num_states()) throw ValidationError("value vector does not cover the arena");
  WeaknessSet out;
  out.epsilon = epsilon;
  out.values = values;
  out.guaranteed = product_values(arena, spec, sigma);
  const std::size_t n = arena.num_states();
  out.weak.assign(out.guaranteed.size(), false);
  for (std::size_t i = 0; i < out.guaranteed.size(); ++i) {
    out.weak[i] = out.guaranteed[i] < values[i % n] - 2 * epsilon;
  }
  return out;
}

WeaknessSet weakness_set(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma,
                         const Rational& epsilon) {
  return weakness_set(arena, spec, sigma, epsilon, brute_force_value(arena, spec).values);
}

FiniteMemoryStrategy reset_strategy(const Arena& arena, const FiniteMemoryStrategy& sigma, const WeaknessSet& weak) {
  if (weak.weak.size() != sigma.memory_size() * arena.num_states()) {
    throw ValidationError("weakness set was computed for a different strategy");
  }
  FiniteMemoryStrategy out = sigma;
  const auto m0 = sigma.initial();
  for (FiniteMemoryStrategy::Memory m = 0; m < sigma.memory_size(); ++m) {
    for (PairIndex pair = 0; pair < arena.num_pairs(); ++pair) {
      for (StateId next = 0; next < arena.num_states(); ++next) {
        const auto raw = sigma.raw_update(m, pair, next);
        if (raw == FiniteMemoryStrategy::kUnset) continue;
        out.set_update(m, pair, next, weak.contains(raw, next) ? m0 : raw);
      }
    }
  }
  return out;
}

void PartitionAtState::validate(const Arena& arena) const {
  if (pivot >= arena.num_states()) throw ValidationError("pivot state out of range");
  if (arena.owner(pivot) != Player::P1) throw ValidationError("pivot state must belong to P1");
  if (side0.empty() || side1.empty()) throw ValidationError("both sides of the partition must be non-empty");
  std::vector<int> seen(arena.num_actions(pivot), 0);
  for (const auto* side : {&side0, &side1}) {
    for (ActionIndex a : *side) {
      if (a >= seen.size()) throw ValidationError("partition names an unavailable action");
      if (seen[a]++) throw ValidationError("partition sides overlap");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw ValidationError("partition does not cover every action");
}

int PartitionAtState::side_of(ActionIndex a) const {
  return std::find(side0.begin(), side0.end(), a) != side0.end() ? 0 : 1;
}

Arena PartitionAtState::sub_arena(const Arena& arena, int j) const {
  auto keep = j == 0 ? side0 : side1;
  std::sort(keep.begin(), keep.end());
  return arena.restrict_actions(pivot, keep);
}

FiniteMemoryStrategy trigger_strategy(const Arena& arena, const FiniteMemoryStrategy& tau0,
                                      const FiniteMemoryStrategy& tau1, const PartitionAtState& split) {
  split.validate(arena);
  for (const auto* tau : {&tau0, &tau1}) {
    if (tau->player() != Player::P2) throw ValidationError("trigger strategy combines P2 strategies");
    if (tau->num_pairs() != arena.num_pairs() || tau->num_states() != arena.num_states()) {
      throw ValidationError("tau must be written against the full arena's actions");
    }
  }
  using Memory = FiniteMemoryStrategy::Memory;
  const std::size_t k0 = tau0.memory_size();
  const std::size_t k1 = tau1.memory_size();
  auto encode = [&](int side, Memory a, Memory b) { return static_cast<Memory>((side * k0 + a) * k1 + b); };
  std::vector<std::string> names;
  for (int side = 0; side < 2; ++side) {
    for (Memory a = 0; a < k0; ++a) {
      for (Memory b = 0; b < k1; ++b) {
        names.push_back(std::to_string(side) + "/" + tau0.memory_name(a) + "/" + tau1.memory_name(b));
      }
    }
  }
  FiniteMemoryStrategy out(arena, Player::P2, names, encode(0, tau0.initial(), tau1.initial()));
  for (int side = 0; side < 2; ++side) {
    for (Memory a = 0; a < k0; ++a) {
      for (Memory b = 0; b < k1; ++b) {
        const Memory m = encode(side, a, b);
        for (PairIndex p = 0; p < arena.num_pairs(); ++p) {
          const StateId x = arena.pair_state(p);
          const int active = x == split.pivot ? split.side_of(arena.pair_action(p)) : side;
          for (StateId y = 0; y < arena.num_states(); ++y) {
            Memory na = a, nb = b;
            if (active == 0) {
              na = tau0.raw_update(a, p, y);
            } else {
              nb = tau1.raw_update(b, p, y);
            }
            if (na == FiniteMemoryStrategy::kUnset || nb == FiniteMemoryStrategy::kUnset) continue;
            out.set_update(m, p, y, encode(active, na, nb));
          }
        }
        for (StateId t = 0; t < arena.num_states(); ++t) {
          if (arena.owner(t) != Player::P2) continue;
          out.set_choice(m, t, side == 0 ? tau0.choice(a, t) : tau1.choice(b, t));
        }
      }
    }
  }
  return out;
}

}  // namespace spg
