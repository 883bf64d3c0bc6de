#include "spg/strategy.hpp"

#include "spg/errors.hpp"

namespace spg {

PureStationaryStrategy pure_strategy_from_index(const Arena& arena, Player player, std::uint64_t index) {
  PureStationaryStrategy out;
  out.player = player;
  out.choice.resize(arena.num_states());
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (arena.owner(s) != player) continue;
    const auto k = arena.num_actions(s);
    out.choice[s] = static_cast<ActionIndex>(index % k);
    index /= k;
  }
  return out;
}

PureStationaryStrategy first_action_strategy(const Arena& arena, Player player) {
  return pure_strategy_from_index(arena, player, 0);
}

FiniteMemoryStrategy::FiniteMemoryStrategy(const Arena& arena, Player player, std::vector<std::string> memory_names,
                                           Memory initial)
    : player_(player),
      memory_names_(std::move(memory_names)),
      initial_(initial),
      num_states_(arena.num_states()),
      num_pairs_(arena.num_pairs()) {
  if (memory_names_.empty()) throw ValidationError("strategy needs at least one memory state");
  if (initial_ >= memory_names_.size()) throw ValidationError("initial memory out of range");
  update_.assign(memory_names_.size() * num_pairs_ * num_states_, kUnset);
  choice_.assign(memory_names_.size() * num_states_, {});
}

FiniteMemoryStrategy FiniteMemoryStrategy::from_pure(const Arena& arena, const PureStationaryStrategy& pure) {
  FiniteMemoryStrategy out(arena, pure.player, {"m0"}, 0);
  out.set_updates([](Memory, PairIndex, StateId) { return Memory{0}; });
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (arena.owner(s) == pure.player) out.set_pure_choice(0, s, pure.at(s));
  }
  return out;
}

void FiniteMemoryStrategy::set_update(Memory from, PairIndex pair, StateId next, Memory to) {
  if (from >= memory_size() || to >= memory_size()) throw ValidationError("memory index out of range");
  update_[(static_cast<std::size_t>(from) * num_pairs_ + pair) * num_states_ + next] = to;
}

void FiniteMemoryStrategy::set_updates(const std::function<Memory(Memory, PairIndex, StateId)>& fn) {
  for (Memory m = 0; m < memory_size(); ++m) {
    for (PairIndex p = 0; p < num_pairs_; ++p) {
      for (StateId t = 0; t < num_states_; ++t) set_update(m, p, t, fn(m, p, t));
    }
  }
}

FiniteMemoryStrategy::Memory FiniteMemoryStrategy::update(Memory from, PairIndex pair, StateId next) const {
  const auto m = raw_update(from, pair, next);
  if (m == kUnset) {
    throw ValidationError("memory automaton not total: no update from memory '" + memory_names_[from] +
                          "' on pair #" + std::to_string(pair) + " to state #" + std::to_string(next));
  }
  return m;
}

void FiniteMemoryStrategy::set_choice(Memory m, StateId s, ActionDistribution dist) {
  if (m >= memory_size() || s >= num_states_) throw ValidationError("choice index out of range");
  choice_[static_cast<std::size_t>(m) * num_states_ + s] = std::move(dist);
}

bool FiniteMemoryStrategy::is_pure() const {
  for (const auto& d : choice_) {
    if (d.size() > 1) return false;
  }
  return true;
}

void FiniteMemoryStrategy::validate(const Arena& arena) const {
  if (arena.num_states() != num_states_ || arena.num_pairs() != num_pairs_) {
    throw ValidationError("strategy was built for a different arena");
  }
  for (Memory m = 0; m < memory_size(); ++m) {
    for (StateId s = 0; s < num_states_; ++s) {
      const auto& dist = choice(m, s);
      const std::string where = "(" + memory_names_[m] + "," + arena.state_name(s) + ")";
      if (arena.owner(s) != player_) {
        if (!dist.empty()) throw ValidationError("strategy of " + to_string(player_) + " chooses at " + where);
        continue;
      }
      if (dist.empty()) throw ValidationError("strategy has no choice at " + where);
      Rational total = 0;
      for (const auto& [a, w] : dist) {
        if (a >= arena.num_actions(s)) throw ValidationError("choice at " + where + " uses an unavailable action");
        if (w < 0) throw ValidationError("negative weight at " + where);
        total += w;
      }
      if (total != 1) throw ValidationError("choice at " + where + " sums to " + to_string(total));
    }
    for (StateId s = 0; s < num_states_; ++s) {
      for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
        for (const auto& succ : arena.action(s, a).successors) {
          if (succ.prob == 0) continue;
          if (raw_update(m, arena.pair_index(s, a), succ.state) == kUnset) {
            throw ValidationError("memory automaton not total: no update from '" + memory_names_[m] + "' on (" +
                                  arena.state_name(s) + "," + arena.action(s, a).name + ") to '" +
                                  arena.state_name(succ.state) + "'");
          }
        }
      }
    }
  }
}

}  // namespace spg
