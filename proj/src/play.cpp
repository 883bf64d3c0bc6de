#include "spg/play.hpp"

#include "spg/errors.hpp"

namespace spg {

void FinitePlay::validate(const Arena& arena) const {
  if (states.empty()) throw ValidationError("play has no state");
  if (states.size() != actions.size() + 1) throw ValidationError("play does not alternate states and actions");
  for (auto s : states) {
    if (s >= arena.num_states()) throw ValidationError("play visits an unknown state");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] >= arena.num_actions(states[i])) {
      throw ValidationError("play uses an action unavailable at '" + arena.state_name(states[i]) + "'");
    }
  }
}

void LassoPlay::validate(const Arena& arena) const {
  prefix.validate(arena);
  cycle.validate(arena);
  if (cycle.actions.empty()) throw ValidationError("lasso cycle is empty");
  if (cycle.source() != prefix.target() || cycle.target() != cycle.source()) {
    throw ValidationError("lasso cycle does not return to the prefix target");
  }
}

std::size_t sample_index(const std::vector<Rational>& weights, Rng& rng) {
  const double u = uniform_unit(rng);
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += to_double(weights[i]);
    if (u < acc) return i;
  }
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return 0;
}

FinitePlay sample_play(const Arena& arena, const FiniteMemoryStrategy& sigma, const FiniteMemoryStrategy& tau,
                       StateId source, std::size_t horizon, Rng& rng) {
  if (source >= arena.num_states()) throw ValidationError("source state out of range");
  FinitePlay play;
  play.states.push_back(source);
  auto m1 = sigma.initial();
  auto m2 = tau.initial();
  StateId s = source;
  std::vector<Rational> weights;
  for (std::size_t step = 0; step < horizon; ++step) {
    const auto& dist = arena.owner(s) == Player::P1 ? sigma.choice(m1, s) : tau.choice(m2, s);
    ActionIndex a;
    if (dist.size() == 1) {
      a = dist[0].first;
    } else {
      weights.clear();
      for (const auto& [act, w] : dist) weights.push_back(w);
      a = dist[sample_index(weights, rng)].first;
    }
    const auto& succ = arena.action(s, a).successors;
    StateId next;
    if (succ.size() == 1) {
      next = succ[0].state;
    } else {
      weights.clear();
      for (const auto& x : succ) weights.push_back(x.prob);
      next = succ[sample_index(weights, rng)].state;
    }
    const auto p = arena.pair_index(s, a);
    m1 = sigma.update(m1, p, next);
    m2 = tau.update(m2, p, next);
    play.actions.push_back(a);
    play.states.push_back(next);
    s = next;
  }
  return play;
}

std::string describe(const Arena& arena, const FinitePlay& play) {
  std::string out = arena.state_name(play.states[0]);
  for (std::size_t i = 0; i < play.actions.size(); ++i) {
    out += " " + arena.action(play.states[i], play.actions[i]).name + " " + arena.state_name(play.states[i + 1]);
  }
  return out;
}

}  // namespace spg
