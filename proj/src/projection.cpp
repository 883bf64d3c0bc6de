#include "spg/constructions.hpp"

#include "spg/errors.hpp"

namespace spg {

namespace {

/// Labels the transitions of `steps` (starting at `state`) with the side of
/// the last pivot departure, continuing from `side`.
std::vector<int> label(const std::vector<Transition>& steps, StateId state, int& side,
                       const PartitionAtState& split) {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& t : steps) {
    if (state == split.pivot) side = split.side_of(t.action);
    out.push_back(side);
    state = t.target;
  }
  return out;
}

FinitePlay rebuild(StateId start, const std::vector<Transition>& steps, const std::vector<int>& sides, int side) {
  FinitePlay out;
  out.states.push_back(start);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (sides[i] != side) continue;
    out.actions.push_back(steps[i].action);
    out.states.push_back(steps[i].target);
  }
  return out;
}

struct Labelled {
  std::vector<Transition> prefix;
  std::vector<int> prefix_sides;
  std::vector<Transition> cycle;
  std::vector<int> cycle_sides;
};

/// Unrolls one cycle iteration into the prefix so that cycle labels are the
/// same on every later iteration.
Labelled label_lasso(const LassoPlay& play, const PartitionAtState& split) {
  if (play.prefix.source() != split.pivot) throw ValidationError("projection needs a play starting at the pivot");
  Labelled out;
  out.prefix = transitions_of(play.prefix);
  out.cycle = transitions_of(play.cycle);
  int side = 0;
  out.prefix_sides = label(out.prefix, play.prefix.source(), side, split);
  const auto first = label(out.cycle, play.cycle.source(), side, split);
  out.prefix.insert(out.prefix.end(), out.cycle.begin(), out.cycle.end());
  out.prefix_sides.insert(out.prefix_sides.end(), first.begin(), first.end());
  out.cycle_sides = label(out.cycle, play.cycle.source(), side, split);
  return out;
}

void push_runs(const std::vector<int>& sides, std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  std::pair<std::size_t, std::size_t> pending{0, 0};
  bool have_v = false;
  for (int s : sides) {
    if (s == 0) {
      if (have_v) {
        blocks.push_back(pending);
        pending = {0, 0};
        have_v = false;
      }
      ++pending.first;
    } else {
      ++pending.second;
      have_v = true;
    }
  }
  if (pending.first + pending.second > 0) blocks.push_back(pending);
}

}  // namespace

std::vector<Transition> transitions_of(const FinitePlay& play) {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < play.actions.size(); ++i) out.push_back({play.actions[i], play.states[i + 1]});
  return out;
}

std::vector<int> transition_sides(const FinitePlay& play, const PartitionAtState& split) {
  if (play.source() != split.pivot) throw ValidationError("projection needs a play starting at the pivot");
  int side = 0;
  return label(transitions_of(play), play.source(), side, split);
}

FinitePlay project(const FinitePlay& play, const PartitionAtState& split, int side) {
  const auto sides = transition_sides(play, split);
  return rebuild(play.source(), transitions_of(play), sides, side);
}

ProjectedLasso project(const LassoPlay& play, const PartitionAtState& split, int side) {
  const auto l = label_lasso(play, split);
  ProjectedLasso out;
  out.finite = rebuild(split.pivot, l.prefix, l.prefix_sides, side);
  bool infinite = false;
  for (int s : l.cycle_sides) infinite = infinite || s == side;
  if (!infinite) return out;
  LassoPlay lasso;
  lasso.prefix = out.finite;
  lasso.cycle = rebuild(out.finite.target(), l.cycle, l.cycle_sides, side);
  out.lasso = std::move(lasso);
  return out;
}

Factorisation factorise(const LassoPlay& play, const PartitionAtState& split) {
  const auto l = label_lasso(play, split);
  Factorisation out;
  out.word.prefix = l.prefix;
  out.word.cycle = l.cycle;
  push_runs(l.prefix_sides, out.pattern.prefix_blocks);
  push_runs(l.cycle_sides, out.pattern.repeated_blocks);
  return out;
}

TransitionWord transition_word(const LassoPlay& play) {
  return {transitions_of(play.prefix), transitions_of(play.cycle)};
}

}  // namespace spg
