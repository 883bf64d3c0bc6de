#include "spg/fixtures.hpp"

#include "spg/errors.hpp"

namespace spg::fixtures {

using Memory = FiniteMemoryStrategy::Memory;

namespace {

ActionEntry act(std::string name, ColourToken colour, std::vector<Successor> successors) {
  return {std::move(name), std::move(colour), std::move(successors)};
}

Reward reward(long v) { return Reward{Rational(v)}; }

StateId id(const Arena& arena, std::string_view name) { return *arena.find_state(name); }
ActionIndex action(const Arena& arena, std::string_view state, std::string_view name) {
  return *arena.find_action(id(arena, state), name);
}

}  // namespace

Arena e2() {
  return Arena::build({
      {"s", Player::P1, {act("stay", reward(0), {{0, 1}}), act("go", reward(1), {{1, 1}})}},
      {"t", Player::P1, {act("loop", reward(1), {{1, 1}})}},
  });
}

FiniteMemoryStrategy e2_weak_sigma(const Arena& arena) {
  FiniteMemoryStrategy sigma(arena, Player::P1, {"m0", "m1"});
  sigma.set_updates([](Memory m, PairIndex, StateId) { return m; });
  sigma.set_pure_choice(0, id(arena, "s"), action(arena, "s", "go"));
  sigma.set_pure_choice(1, id(arena, "s"), action(arena, "s", "stay"));
  for (Memory m = 0; m < 2; ++m) sigma.set_pure_choice(m, id(arena, "t"), 0);
  return sigma;
}

namespace {

Arena e3_with(ColourToken cs, ColourToken ct, ColourToken cu) {
  const Rational half(1, 2);
  return Arena::build({
      {"s", Player::P1, {act("a", std::move(cs), {{1, half}, {2, half}})}},
      {"t", Player::P1, {act("loop", std::move(ct), {{1, 1}})}},
      {"u", Player::P1, {act("loop", std::move(cu), {{2, 1}})}},
  });
}

}  // namespace

Arena e3_mean() { return e3_with(reward(0), reward(0), reward(2)); }
Arena e3_parity() { return e3_with(Priority{0}, Priority{2}, Priority{1}); }

Arena e4() {
  return Arena::build({
      {"s", Player::P1, {act("stay", reward(0), {{0, 1}}), act("go", reward(1), {{1, 1}})}},
      {"t", Player::P1, {act("next", reward(1), {{0, Rational(7, 8)}, {2, Rational(1, 8)}})}},
      {"u", Player::P1, {act("back", reward(1), {{0, 1}})}},
  });
}

FiniteMemoryStrategy e4_sigma(const Arena& arena) {
  // m1 stays forever (weak); m2 goes forever; m3 marks u entered from t.
  FiniteMemoryStrategy sigma(arena, Player::P1, {"m0", "m1", "m2", "m3"});
  const StateId s = id(arena, "s");
  const StateId u = id(arena, "u");
  const PairIndex via_u = arena.pair_index(u, 0);
  const PairIndex via_t = arena.pair_index(id(arena, "t"), 0);
  sigma.set_updates([&](Memory m, PairIndex p, StateId next) -> Memory {
    if (m == 0 && p == via_t) return next == u ? 3 : 2;
    if (m == 0 && p == via_u) return 2;
    if (m == 3 && p == via_u) return 1;
    return m;
  });
  const ActionIndex go = action(arena, "s", "go");
  const ActionIndex stay = action(arena, "s", "stay");
  for (Memory m = 0; m < 4; ++m) {
    sigma.set_pure_choice(m, s, m == 1 ? stay : go);
    sigma.set_pure_choice(m, id(arena, "t"), 0);
    sigma.set_pure_choice(m, u, 0);
  }
  return sigma;
}

Arena fig1() {
  const Letter eps{""}, a{"a"}, b{"b"};
  return Arena::build({
      {"s", Player::P2, {act("1", eps, {{1, 1}}), act("2", eps, {{3, 1}})}},
      {"c1", Player::P1, {act("1", b, {{0, 1}}), act("2", b, {{2, 1}})}},
      {"c2", Player::P1, {act("back", b, {{0, 1}})}},
      {"c3", Player::P1, {act("back", a, {{0, 1}})}},
  });
}

namespace {

FiniteMemoryStrategy fig1_base(const Arena& arena, std::vector<std::string> memories) {
  FiniteMemoryStrategy sigma(arena, Player::P1, std::move(memories));
  for (Memory m = 0; m < sigma.memory_size(); ++m) {
    sigma.set_pure_choice(m, id(arena, "c2"), 0);
    sigma.set_pure_choice(m, id(arena, "c3"), 0);
  }
  return sigma;
}

}  // namespace

FiniteMemoryStrategy fig1_stationary(const Arena& arena, const std::string& name) {
  auto sigma = fig1_base(arena, {"m0"});
  const auto a = arena.find_action(id(arena, "c1"), name);
  if (!a) throw ValidationError("c1 has no action " + name);
  sigma.set_updates([](Memory, PairIndex, StateId) { return Memory{0}; });
  sigma.set_pure_choice(0, id(arena, "c1"), *a);
  return sigma;
}

namespace {

FiniteMemoryStrategy fig1_alternating_impl(const Arena& arena, bool reset) {
  auto sigma = fig1_base(arena, {"play1", "play2"});
  const StateId c1 = id(arena, "c1");
  const StateId c3 = id(arena, "c3");
  sigma.set_updates([&](Memory m, PairIndex p, StateId next) -> Memory {
    if (reset && next == c3) return 0;
    if (arena.pair_state(p) == c1) return 1 - m;
    return m;
  });
  sigma.set_pure_choice(0, c1, action(arena, "c1", "1"));
  sigma.set_pure_choice(1, c1, action(arena, "c1", "2"));
  return sigma;
}

}  // namespace

FiniteMemoryStrategy fig1_alternating(const Arena& arena) { return fig1_alternating_impl(arena, true); }
FiniteMemoryStrategy fig1_alternating_no_reset(const Arena& arena) { return fig1_alternating_impl(arena, false); }

Arena one_counter() {
  const Rational half(1, 2);
  return Arena::build({
      {"s", Player::P1, {act("down", Increment{-1}, {{0, 1}}), act("coin", Increment{0}, {{1, 1}})}},
      {"q", Player::P2, {act("up", Increment{1}, {{0, 1}}), act("gamble", Increment{0}, {{2, half}, {3, half}})}},
      {"plus", Player::P1, {act("add", Increment{2}, {{0, 1}})}},
      {"minus", Player::P1, {act("sub", Increment{-2}, {{0, 1}})}},
  });
}

}  // namespace spg::fixtures
