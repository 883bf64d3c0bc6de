#include "spg/arena.hpp"

#include "spg/errors.hpp"

#include <limits>
#include <set>

namespace spg {

std::string to_string(Player player) { return player == Player::P1 ? "P1" : "P2"; }

Arena Arena::build(std::vector<StateEntry> states) {
  if (states.empty()) throw ValidationError("arena has no states");
  Arena arena;
  std::set<std::string> names;
  for (const auto& st : states) {
    if (!names.insert(st.name).second) throw ValidationError("duplicate state '" + st.name + "'");
  }
  bool first_colour = true;
  for (StateId s = 0; s < states.size(); ++s) {
    const auto& st = states[s];
    if (st.actions.empty()) throw ValidationError("state '" + st.name + "' has no available action");
    std::set<std::string> action_names;
    for (const auto& act : st.actions) {
      const std::string where = "(" + st.name + "," + act.name + ")";
      if (!action_names.insert(act.name).second) throw ValidationError("duplicate action at " + where);
      if (act.successors.empty()) throw ValidationError("distribution at " + where + " is empty");
      Rational total = 0;
      std::set<StateId> targets;
      for (const auto& succ : act.successors) {
        if (succ.state >= states.size()) throw ValidationError("distribution at " + where + " names an unknown state");
        if (!targets.insert(succ.state).second) {
          throw ValidationError("distribution at " + where + " lists '" + states[succ.state].name + "' twice");
        }
        if (succ.prob < 0 || succ.prob > 1) {
          throw ValidationError("distribution at " + where + " has entry " + to_string(succ.prob) + " outside [0,1]");
        }
        total += succ.prob;
      }
      if (total != 1) throw ValidationError("distribution at " + where + " sums to " + to_string(total));
      const ColourKind kind = kind_of(act.colour);
      const std::size_t dim = dimension_of(act.colour);
      if (first_colour) {
        arena.kind_ = kind;
        arena.dimension_ = dim;
        first_colour = false;
      } else if (kind != arena.kind_ || dim != arena.dimension_) {
        throw ValidationError("colour at " + where + " is of kind " + to_string(kind) +
                              " but the arena is coloured by " + to_string(arena.kind_));
      }
      if (const auto* d = std::get_if<DiscountedReward>(&act.colour)) {
        if (d->discount < 0 || d->discount >= 1) throw ValidationError("discount at " + where + " outside [0,1)");
      }
    }
  }
  arena.states_ = std::move(states);
  PairIndex offset = 0;
  for (StateId s = 0; s < arena.states_.size(); ++s) {
    arena.pair_offset_.push_back(offset);
    for (std::size_t a = 0; a < arena.states_[s].actions.size(); ++a) arena.pair_state_.push_back(s);
    offset += static_cast<PairIndex>(arena.states_[s].actions.size());
  }
  return arena;
}

Rational Arena::probability(StateId s, ActionIndex a, StateId t) const {
  for (const auto& succ : action(s, a).successors) {
    if (succ.state == t) return succ.prob;
  }
  return 0;
}

std::optional<StateId> Arena::find_state(std::string_view name) const {
  for (StateId s = 0; s < states_.size(); ++s) {
    if (states_[s].name == name) return s;
  }
  return std::nullopt;
}

std::optional<ActionIndex> Arena::find_action(StateId s, std::string_view name) const {
  const auto& acts = states_[s].actions;
  for (ActionIndex a = 0; a < acts.size(); ++a) {
    if (acts[a].name == name) return a;
  }
  return std::nullopt;
}

Arena Arena::restrict_actions(StateId s, const std::vector<ActionIndex>& keep) const {
  if (keep.empty()) throw ValidationError("restriction leaves state '" + state_name(s) + "' without actions");
  auto states = states_;
  std::vector<ActionEntry> kept;
  for (auto a : keep) kept.push_back(states_[s].actions.at(a));
  states[s].actions = std::move(kept);
  return build(std::move(states));
}

std::uint64_t Arena::count_pure_stationary(Player player) const {
  std::uint64_t total = 1;
  for (const auto& st : states_) {
    if (st.owner != player) continue;
    const std::uint64_t k = st.actions.size();
    if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

bool Arena::operator==(const Arena& other) const {
  if (states_.size() != other.states_.size()) return false;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const auto& x = states_[s];
    const auto& y = other.states_[s];
    if (x.name != y.name || x.owner != y.owner || x.actions.size() != y.actions.size()) return false;
    for (std::size_t a = 0; a < x.actions.size(); ++a) {
      const auto& p = x.actions[a];
      const auto& q = y.actions[a];
      if (p.name != q.name || !(p.colour == q.colour) || p.successors.size() != q.successors.size()) return false;
      for (std::size_t i = 0; i < p.successors.size(); ++i) {
        if (p.successors[i].state != q.successors[i].state || p.successors[i].prob != q.successors[i].prob) return false;
      }
    }
  }
  return true;
}

}  // namespace spg
