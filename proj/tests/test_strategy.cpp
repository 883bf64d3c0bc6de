#include "support.hpp"

#include "spg/errors.hpp"
#include "spg/fixtures.hpp"
#include "spg/mdp.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace spg;

namespace {

using Memory = FiniteMemoryStrategy::Memory;

FiniteMemoryStrategy first(const Arena& arena, Player p) {
  return FiniteMemoryStrategy::from_pure(arena, first_action_strategy(arena, p));
}

FiniteMemoryStrategy random_memory2(const Arena& arena, Player player, Rng& rng) {
  FiniteMemoryStrategy s(arena, player, {"m0", "m1"});
  s.set_updates([&](auto, auto, auto) { return static_cast<Memory>(uniform_below(rng, 2)); });
  for (Memory m = 0; m < 2; ++m) {
    for (StateId q = 0; q < arena.num_states(); ++q) {
      if (arena.owner(q) == player) s.set_pure_choice(m, q, static_cast<ActionIndex>(uniform_below(rng, arena.num_actions(q))));
    }
  }
  return s;
}

/// Same choices, and same updates on every successor the arena can produce.
/// Documents only record the latter.
bool same_on_support(const Arena& arena, const FiniteMemoryStrategy& a, const FiniteMemoryStrategy& b) {
  if (a.player() != b.player() || a.memory_names() != b.memory_names() || a.initial() != b.initial()) return false;
  for (Memory m = 0; m < a.memory_size(); ++m) {
    for (StateId s = 0; s < arena.num_states(); ++s) {
      if (a.choice(m, s) != b.choice(m, s)) return false;
      for (ActionIndex act = 0; act < arena.num_actions(s); ++act) {
        for (const auto& succ : arena.action(s, act).successors) {
          const PairIndex p = arena.pair_index(s, act);
          if (a.raw_update(m, p, succ.state) != b.raw_update(m, p, succ.state)) return false;
        }
      }
    }
  }
  return true;
}

/// Arena where every state can move anywhere; plays over it are arbitrary
/// walks. s is P1's pivot with actions a, b, c.
Arena walk_arena() {
  std::vector<StateEntry> states;
  const char* names[] = {"s", "x", "y"};
  for (int i = 0; i < 3; ++i) {
    StateEntry e{names[i], i == 1 ? Player::P2 : Player::P1, {}};
    const char* acts[] = {"a", "b", "c"};
    for (int k = 0; k < 3; ++k) {
      std::vector<Successor> succ;
      for (StateId t = 0; t < 3; ++t) succ.push_back({t, Rational(1, 3)});
      e.actions.push_back({acts[k], Reward{Rational(k)}, succ});
    }
    states.push_back(e);
  }
  return Arena::build(states);
}

/// A closed walk from s back to s starting with action `first`.
void push_factor(FinitePlay& play, ActionIndex first, Rng& rng) {
  play.actions.push_back(first);
  StateId at = static_cast<StateId>(uniform_below(rng, 3));
  play.states.push_back(at);
  while (at != 0) {
    play.actions.push_back(static_cast<ActionIndex>(uniform_below(rng, 3)));
    at = static_cast<StateId>(uniform_below(rng, 3));
    play.states.push_back(at);
  }
}

}  // namespace

TEST_CASE("strategy documents") {
  const auto e4 = fixtures::e4();
  const auto sigma = fixtures::e4_sigma(e4);
  CHECK(same_on_support(e4, strategy_from_json(e4, strategy_to_json(e4, sigma)), sigma));
  std::ifstream in(std::string(SPG_CORPUS_DIR) + "/e4_sigma.json");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(same_on_support(e4, strategy_from_json(e4, nlohmann::json::parse(text.str())), sigma));

  const auto f = fixtures::fig1();
  CHECK(same_on_support(f, load_strategy(f, std::string(SPG_CORPUS_DIR) + "/fig1_alternating.json"), fixtures::fig1_alternating(f)));

  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto arena = testing::corpus_arena(i, ColourKind::Reward);
    Rng rng(i);
    for (Player p : {Player::P1, Player::P2}) {
      const auto s = random_memory2(arena, p, rng);
      REQUIRE(same_on_support(arena, strategy_from_json(arena, strategy_to_json(arena, s)), s));
    }
  }

  const auto e2 = fixtures::e2();
  const auto go = strategy_from_json(e2, nlohmann::json{{"s", "go"}, {"t", "loop"}});
  CHECK(go.memory_size() == 1);
  CHECK(go.choice(0, 0) == ActionDistribution{{*e2.find_action(0, "go"), Rational(1)}});
  CHECK_THROWS_AS(strategy_from_json(e2, nlohmann::json{{"s", "fly"}}), ValidationError);

  // Rules are tried in order; a transition no rule matches keeps its memory.
  const auto doc = nlohmann::json::parse(R"({
    "player": "P1", "memory_states": ["m0", "m1"], "initial": "m0",
    "update": [{"from": "m0", "action": "stay", "to": "m1"}],
    "choice": [{"memory": "m0", "state": "s", "action": "stay"}, {"memory": "m1", "state": "s", "action": "go"},
               {"memory": "m0", "state": "t", "action": "loop"}, {"memory": "m1", "state": "t", "action": "loop"}]
  })");
  const auto rules = strategy_from_json(e2, doc);
  const PairIndex stay = e2.pair_index(0, *e2.find_action(0, "stay")), go_pair = e2.pair_index(0, *e2.find_action(0, "go"));
  CHECK(rules.update(0, stay, 0) == 1);
  CHECK(rules.update(0, go_pair, 1) == 0);
  CHECK(rules.update(1, stay, 0) == 1);
}

TEST_CASE("product values") {
  const auto e2 = fixtures::e2();
  const auto mean = PayoffSpec::parse("mean");
  const auto weak = fixtures::e2_weak_sigma(e2);
  const auto pv = product_values(e2, mean, weak);
  CHECK(pv == std::vector<Rational>{1, 1, 0, 1});

  // Identical rows in both memories give memory-independent values.
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto arena = testing::corpus_arena(i, mean);
    const auto v = brute_force_value(arena, mean);
    FiniteMemoryStrategy twice(arena, Player::P1, {"m0", "m1"});
    Rng rng(i);
    twice.set_updates([&](auto, auto, auto) { return static_cast<Memory>(uniform_below(rng, 2)); });
    for (Memory m = 0; m < 2; ++m) {
      for (StateId s = 0; s < arena.num_states(); ++s) {
        if (arena.owner(s) == Player::P1) twice.set_pure_choice(m, s, v.sigma_star.at(s));
      }
    }
    const auto values = product_values(arena, mean, twice);
    const auto n = arena.num_states();
    for (StateId s = 0; s < n; ++s) {
      REQUIRE(values[s] == values[n + s]);
      REQUIRE(values[s] == v.values[s]);
    }
  }
}

TEST_CASE("weakness sets and the reset strategy") {
  const auto e2 = fixtures::e2();
  const auto mean = PayoffSpec::parse("mean");
  const auto sigma = fixtures::e2_weak_sigma(e2);
  const auto quarter = weakness_set(e2, mean, sigma, make_rational(1, 4));
  CHECK(quarter.contains(1, 0));
  CHECK_FALSE(quarter.contains(1, 1));
  CHECK_FALSE(quarter.contains(0, 0));
  CHECK_FALSE(quarter.contains(0, 1));
  CHECK(weakness_set(e2, mean, sigma, Rational(1)).empty());

  const auto optimal = FiniteMemoryStrategy::from_pure(e2, brute_force_value(e2, mean).sigma_star);
  CHECK(weakness_set(e2, mean, optimal, make_rational(1, 100)).empty());

  // Reset: the step that would land on (m1, s) goes to m0 instead.
  const auto hat = reset_strategy(e2, sigma, quarter);
  const PairIndex stay = e2.pair_index(0, *e2.find_action(0, "stay"));
  CHECK(hat.update(1, stay, 0) == 0);
  const auto guaranteed = product_values(e2, mean, hat);
  const auto reach = reachable_pairs(e2, hat);
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (reach[k]) CHECK(guaranteed[k] >= Rational(1) - Rational(1, 2));
  }

  // Empty set: same induced chain.
  const auto same = reset_strategy(e2, sigma, weakness_set(e2, mean, sigma, Rational(1)));
  const auto c1 = induce_chain(e2, sigma, first(e2, Player::P2));
  const auto c2 = induce_chain(e2, same, first(e2, Player::P2));
  CHECK(c1.rows == c2.rows);

  // Weak at (m0, s) itself: the reset is a no-op there and the strategy
  // stays total.
  FiniteMemoryStrategy stay_forever(e2, Player::P1, {"m0"});
  stay_forever.set_updates([](auto, auto, auto) { return Memory{0}; });
  stay_forever.set_pure_choice(0, 0, *e2.find_action(0, "stay"));
  stay_forever.set_pure_choice(0, 1, 0);
  const auto w0 = weakness_set(e2, mean, stay_forever, make_rational(1, 4));
  CHECK(w0.contains(0, 0));
  const auto looped = reset_strategy(e2, stay_forever, w0);
  CHECK_NOTHROW(looped.validate(e2));
  CHECK(looped.update(0, stay, 0) == 0);
}

TEST_CASE("projections of finite plays") {
  const auto arena = walk_arena();
  const PartitionAtState split{0, {0}, {1, 2}};
  split.validate(arena);
  // h = s b s a s
  const FinitePlay h{{0, 0, 0}, {1, 0}};
  CHECK(project(h, split, 0) == FinitePlay{{0, 0}, {0}});
  CHECK(project(h, split, 1) == FinitePlay{{0, 0}, {1}});
  // An open factor at the end belongs to its side.
  const FinitePlay open{{0, 1, 2}, {0, 2}};
  CHECK(project(open, split, 0) == open);
  CHECK(project(open, split, 1) == FinitePlay{{0}, {}});
  CHECK_THROWS_AS(project(FinitePlay{{1, 0}, {0}}, split, 0), ValidationError);

  CHECK_THROWS_AS((PartitionAtState{0, {0}, {0, 1, 2}}.validate(arena)), ValidationError);
  CHECK_THROWS_AS((PartitionAtState{0, {}, {0, 1, 2}}.validate(arena)), ValidationError);
  CHECK_THROWS_AS((PartitionAtState{0, {0}, {1}}.validate(arena)), ValidationError);
  CHECK_THROWS_AS((PartitionAtState{1, {0}, {1, 2}}.validate(arena)), ValidationError);
}

TEST_CASE("projections of lassos") {
  const auto arena = walk_arena();
  const PartitionAtState split{0, {0}, {1, 2}};
  // Cycle made of side-0 factors only: pi_1 is finite.
  const LassoPlay only0{{{0, 0}, {1}}, {{0, 1, 0}, {0, 2}}};
  const auto p1 = project(only0, split, 1);
  CHECK(p1.is_finite());
  CHECK(p1.finite == FinitePlay{{0, 0}, {1}});
  CHECK_FALSE(project(only0, split, 0).is_finite());

  // Alternating cycle: both projections infinite and back at s each time.
  const LassoPlay alt{{{0}, {}}, {{0, 0, 0}, {0, 1}}};
  for (int side = 0; side < 2; ++side) {
    const auto p = project(alt, split, side);
    REQUIRE_FALSE(p.is_finite());
    CHECK(p.lasso->cycle.source() == 0);
    CHECK(p.lasso->cycle.target() == 0);
    p.lasso->validate(arena);
  }
}

TEST_CASE("a play is the shuffle of its projections") {
  const auto arena = walk_arena();
  const PartitionAtState split{0, {0}, {1, 2}};
  Rng rng(derive_seed(testing::kCorpusSeed, 77));
  std::size_t both_infinite = 0;
  for (int k = 0; k < 2000; ++k) {
    LassoPlay play;
    play.prefix.states.push_back(0);
    const auto pre = uniform_below(rng, 4), cyc = 1 + uniform_below(rng, 4);
    for (std::uint64_t i = 0; i < pre; ++i) push_factor(play.prefix, static_cast<ActionIndex>(uniform_below(rng, 3)), rng);
    play.cycle.states.push_back(0);
    for (std::uint64_t i = 0; i < cyc; ++i) push_factor(play.cycle, static_cast<ActionIndex>(uniform_below(rng, 3)), rng);
    play.validate(arena);
    const auto p0 = project(play, split, 0), p1 = project(play, split, 1);
    if (p0.is_finite() || p1.is_finite()) {
      // The cycle then lies in the other sub-arena: all its pivot actions
      // are on one side.
      const int other = p0.is_finite() ? 1 : 0;
      for (std::size_t i = 0; i < play.cycle.length(); ++i) {
        if (play.cycle.states[i] == 0) REQUIRE(split.side_of(play.cycle.actions[i]) == other);
      }
      continue;
    }
    ++both_infinite;
    const auto f = factorise(play, split);
    const auto rebuilt = spg::shuffle(transition_word(*p0.lasso), transition_word(*p1.lasso), f.pattern);
    for (std::size_t i = 0; i < 200; ++i) REQUIRE(rebuilt.at(i) == transition_word(play).at(i));
  }
  CHECK(both_infinite > 500);
}

TEST_CASE("trigger strategy") {
  // s: P1 pivot with a, b to q; q: P2 with x, y back to s or r; r: P2.
  const auto arena = parse_arena(R"({
    "states": [{"name": "s", "owner": "P1"}, {"name": "q", "owner": "P2"}, {"name": "r", "owner": "P2"}],
    "actions": [
      {"state": "s", "action": "a", "colour": 0, "successors": [{"state": "q", "prob": "1"}]},
      {"state": "s", "action": "b", "colour": 1, "successors": [{"state": "q", "prob": "1/2"}, {"state": "r", "prob": "1/2"}]},
      {"state": "q", "action": "x", "colour": 0, "successors": [{"state": "s", "prob": "1"}]},
      {"state": "q", "action": "y", "colour": 2, "successors": [{"state": "r", "prob": "1"}]},
      {"state": "r", "action": "x", "colour": 0, "successors": [{"state": "s", "prob": "1/2"}, {"state": "q", "prob": "1/2"}]},
      {"state": "r", "action": "y", "colour": 1, "successors": [{"state": "s", "prob": "1"}]}]
  })");
  const PartitionAtState split{0, {0}, {1}};

  // Memoryless and equal: same behaviour everywhere.
  const auto t0 = first(arena, Player::P2);
  const auto same = trigger_strategy(arena, t0, t0, split);
  for (Memory m = 0; m < same.memory_size(); ++m) {
    for (StateId q : {1u, 2u}) CHECK(same.choice(m, q) == t0.choice(0, q));
  }

  // Memoryless and different at q: two memories, switching on the flag.
  const auto t1 = FiniteMemoryStrategy::from_pure(arena, PureStationaryStrategy{Player::P2, {{}, ActionIndex{1}, ActionIndex{0}}});
  const auto flag = trigger_strategy(arena, t0, t1, split);
  CHECK(flag.memory_size() == 2);
  CHECK(flag.choice(0, 1) == t0.choice(0, 1));
  CHECK(flag.choice(1, 1) == t1.choice(0, 1));
  const PairIndex via_b = arena.pair_index(0, 1);
  CHECK(flag.update(0, via_b, 1) == 1);

  // Memory-2 tau_j: the trigger's choice equals tau_j run on the projected
  // history, recomputed from scratch.
  Rng rng(derive_seed(testing::kCorpusSeed, 88));
  for (int k = 0; k < 200; ++k) {
    const auto tau0 = random_memory2(arena, Player::P2, rng);
    const auto tau1 = random_memory2(arena, Player::P2, rng);
    const auto trig = trigger_strategy(arena, tau0, tau1, split);
    trig.validate(arena);
    const auto sigma = random_memory2(arena, Player::P1, rng);
    const auto play = sample_play(arena, sigma, trig, 0, 40, rng);
    Memory mt = trig.initial();
    for (std::size_t n = 0; n <= play.length(); ++n) {
      FinitePlay h{{play.states.begin(), play.states.begin() + static_cast<std::ptrdiff_t>(n + 1)},
                   {play.actions.begin(), play.actions.begin() + static_cast<std::ptrdiff_t>(n)}};
      if (arena.owner(h.target()) == Player::P2) {
        const auto sides = transition_sides(h, split);
        const int j = sides.empty() ? 0 : sides.back();
        const auto& tj = j == 0 ? tau0 : tau1;
        const auto proj = project(h, split, j);
        Memory m = tj.initial();
        for (std::size_t i = 0; i < proj.length(); ++i) {
          m = tj.update(m, arena.pair_index(proj.states[i], proj.actions[i]), proj.states[i + 1]);
        }
        REQUIRE(trig.choice(mt, h.target()) == tj.choice(m, h.target()));
      }
      if (n < play.length()) mt = trig.update(mt, arena.pair_index(play.states[n], play.actions[n]), play.states[n + 1]);
    }
  }
}

TEST_CASE("P2 guarantee against enumeration on the product") {
  for (const char* text : {"mean", "posavg", "meancobuchi:100", "parity", "limsup", "liminf", "discounted"}) {
    const auto spec = PayoffSpec::parse(text);
    for (std::uint64_t i = 0; i < 40; ++i) {
      const auto arena = testing::corpus_arena(i, spec);
      Rng rng(derive_seed(testing::kCorpusSeed, 900 + i));
      const auto sigma = random_memory2(arena, Player::P1, rng);
      const auto fast = p2_guarantee(arena, spec, sigma);
      // Oracle: P2 pure strategies that track sigma's memory and choose per
      // (memory, state), enumerated in full.
      std::vector<StateId> mine;
      for (StateId s = 0; s < arena.num_states(); ++s) {
        if (arena.owner(s) == Player::P2) mine.push_back(s);
      }
      std::uint64_t count = 1;
      for (StateId s : mine) count *= arena.num_actions(s) * arena.num_actions(s);
      std::vector<std::optional<Rational>> best(arena.num_states());
      for (std::uint64_t code = 0; code < count; ++code) {
        FiniteMemoryStrategy tau(arena, Player::P2, {"m0", "m1"});
        tau.set_updates([&](Memory m, PairIndex p, StateId next) { return sigma.update(m, p, next); });
        std::uint64_t c = code;
        for (Memory m = 0; m < 2; ++m) {
          for (StateId s : mine) {
            tau.set_pure_choice(m, s, static_cast<ActionIndex>(c % arena.num_actions(s)));
            c /= arena.num_actions(s);
          }
        }
        for (StateId s = 0; s < arena.num_states(); ++s) {
          const auto v = expected_payoff(arena, spec, sigma, tau, s);
          if (!best[s] || v < *best[s]) best[s] = v;
        }
      }
      for (StateId s = 0; s < arena.num_states(); ++s) REQUIRE(fast[s] == *best[s]);
    }
  }
}

TEST_CASE("optimistic generalised mean lets P2 mix") {
  // q (P2) loops with (1, -2) or (-2, 1). Each loop alone leaves one
  // dimension non-negative; alternating drives both means to -1/2.
  const auto arena = parse_arena(R"({
    "states": [{"name": "q", "owner": "P2"}],
    "actions": [
      {"state": "q", "action": "l", "colour": {"vector": ["1", "-2"]}, "successors": [{"state": "q", "prob": "1"}]},
      {"state": "q", "action": "r", "colour": {"vector": ["-2", "1"]}, "successors": [{"state": "q", "prob": "1"}]}]
  })");
  const auto spec = PayoffSpec::parse("optgenmean:2");
  const auto sigma = first(arena, Player::P1);
  CHECK(expected_payoff(arena, spec, sigma, first(arena, Player::P2), 0) == 1);
  FiniteMemoryStrategy alternate(arena, Player::P2, {"left", "right"});
  alternate.set_updates([](Memory m, auto, auto) { return 1 - m; });
  alternate.set_pure_choice(0, 0, 0);
  alternate.set_pure_choice(1, 0, 1);
  CHECK(expected_payoff(arena, spec, sigma, alternate, 0) == 0);
  CHECK(p2_guarantee(arena, spec, sigma) == std::vector<Rational>{0});

  // With (1, -1) and (-1, 1) no mixture makes both means negative.
  const auto edge = parse_arena(R"({
    "states": [{"name": "q", "owner": "P2"}],
    "actions": [
      {"state": "q", "action": "l", "colour": {"vector": ["1", "-1"]}, "successors": [{"state": "q", "prob": "1"}]},
      {"state": "q", "action": "r", "colour": {"vector": ["-1", "1"]}, "successors": [{"state": "q", "prob": "1"}]}]
  })");
  CHECK(p2_guarantee(edge, spec, first(edge, Player::P1)) == std::vector<Rational>{1});
  CHECK_THROWS_AS(p2_guarantee(edge, PayoffSpec::parse("genmean:2"), first(edge, Player::P1)), UnsupportedSpec);
}
