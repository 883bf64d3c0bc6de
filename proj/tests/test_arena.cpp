#include "support.hpp"

#include "spg/errors.hpp"
#include "spg/fixtures.hpp"
#include "spg/play.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace spg;

namespace {

const char* kOneState = R"({
  "states": [{"name": "s", "owner": "P1"}],
  "actions": [{"state": "s", "action": "a", "colour": 3, "successors": [{"state": "s", "prob": "1"}]}]
})";

std::string error_of(const std::string& text) {
  try {
    parse_arena(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal document") {
  const auto arena = parse_arena(kOneState);
  CHECK(arena.num_states() == 1);
  CHECK(arena.num_actions(0) == 1);
  CHECK(scalar_of(arena.colour(0, 0)) == 3);
  CHECK(arena.probability(0, 0, 0) == 1);
}

TEST_CASE("distribution that does not sum to one") {
  const auto msg = error_of(R"({
    "states": [{"name": "s", "owner": "P1"}, {"name": "t", "owner": "P1"}],
    "actions": [
      {"state": "s", "action": "a", "colour": 0, "successors": [{"state": "s", "prob": "1/2"}, {"state": "t", "prob": "1/3"}]},
      {"state": "t", "action": "b", "colour": 0, "successors": [{"state": "t", "prob": "1"}]}]
  })");
  CHECK(msg.find("sums to 5/6") != std::string::npos);
}

TEST_CASE("malformed documents") {
  CHECK(error_of("{").find("line") != std::string::npos);
  CHECK(error_of(R"({"states": [], "actions": []})") != "");
  CHECK(error_of(R"({"states": [{"name": "s", "owner": "P3"}], "actions": []})").find("owner") != std::string::npos);
  // A state without actions.
  CHECK(error_of(R"({"states": [{"name": "s", "owner": "P1"}, {"name": "t", "owner": "P1"}],
    "actions": [{"state": "s", "action": "a", "colour": 0, "successors": [{"state": "s", "prob": "1"}]}]})") != "");
  // Mixed colour kinds.
  CHECK(error_of(R"({"states": [{"name": "s", "owner": "P1"}],
    "actions": [{"state": "s", "action": "a", "colour": 0, "successors": [{"state": "s", "prob": "1"}]},
                {"state": "s", "action": "b", "colour": {"priority": 1}, "successors": [{"state": "s", "prob": "1"}]}]})") != "");
}

TEST_CASE("golden counter-example file") {
  const auto arena = load_arena(std::string(SPG_CORPUS_DIR) + "/fig1.json");
  CHECK(arena.num_states() == 4);
  const auto s = arena.find_state("s");
  REQUIRE(s);
  CHECK(arena.owner(*s) == Player::P2);
  for (const char* circle : {"c1", "c2", "c3"}) CHECK(arena.owner(*arena.find_state(circle)) == Player::P1);
  CHECK(arena == fixtures::fig1());
}

TEST_CASE("every shipped arena parses and matches its fixture") {
  const std::string dir = SPG_CORPUS_DIR;
  CHECK(load_arena(dir + "/e2.json") == fixtures::e2());
  CHECK(load_arena(dir + "/e3.json") == fixtures::e3_mean());
  CHECK(load_arena(dir + "/e3_parity.json") == fixtures::e3_parity());
  CHECK(load_arena(dir + "/e4.json") == fixtures::e4());
  CHECK(load_arena(dir + "/one_counter.json") == fixtures::one_counter());
}

TEST_CASE("random arena shapes and determinism") {
  RandomArenaParams one;
  one.num_states = 1;
  one.max_actions = 1;
  one.seed = 0;
  const auto single = random_arena(one).arena;
  CHECK(single.num_states() == 1);
  CHECK(single.num_actions(0) == 1);
  CHECK(single.probability(0, 0, 0) == 1);

  RandomArenaParams p;
  p.num_states = 5;
  p.max_actions = 3;
  p.seed = 42;
  const auto a = random_arena(p).arena;
  CHECK(a.num_states() == 5);
  CHECK(print_arena(a) == print_arena(random_arena(p).arena));
  p.seed = 43;
  CHECK(print_arena(a) != print_arena(random_arena(p).arena));
}

TEST_CASE("random corpus validates and round-trips") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RandomArenaParams p;
    p.num_states = 4;
    p.seed = i;
    p.kind = static_cast<ColourKind>(i % 3);  // rewards, discounted rewards, priorities
    const auto arena = random_arena(p).arena;
    REQUIRE(arena.num_states() == 4);
    for (StateId s = 0; s < 4; ++s) {
      for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
        Rational total = 0;
        for (const auto& succ : arena.action(s, a).successors) total += succ.prob;
        REQUIRE(total == 1);
      }
    }
    const auto again = parse_arena(print_arena(arena));
    REQUIRE(again == arena);
    REQUIRE(print_arena(again) == print_arena(arena));
  }
}

TEST_CASE("sampled plays on deterministic arenas") {
  const auto loop = parse_arena(kOneState);
  const auto sigma = FiniteMemoryStrategy::from_pure(loop, first_action_strategy(loop, Player::P1));
  const auto tau = FiniteMemoryStrategy::from_pure(loop, first_action_strategy(loop, Player::P2));
  Rng rng(1);
  const auto play = sample_play(loop, sigma, tau, 0, 7, rng);
  CHECK(play.length() == 7);
  for (auto s : play.states) CHECK(s == 0);

  // E2 with "go": the unique play s go t loop t ...
  const auto e2 = fixtures::e2();
  const auto go = FiniteMemoryStrategy::from_pure(
      e2, PureStationaryStrategy{Player::P1, {*e2.find_action(0, "go"), ActionIndex{0}}});
  const auto none = FiniteMemoryStrategy::from_pure(e2, first_action_strategy(e2, Player::P2));
  Rng r1(1), r2(99);
  const auto p1 = sample_play(e2, go, none, 0, 5, r1);
  CHECK(p1 == sample_play(e2, go, none, 0, 5, r2));
  CHECK(p1.states == std::vector<StateId>{0, 1, 1, 1, 1, 1});
}

TEST_CASE("sampled plays follow the arena") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto arena = testing::corpus_arena(i, ColourKind::Reward);
    Rng rng(i);
    const auto sigma = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P1, uniform_below(rng, arena.count_pure_stationary(Player::P1))));
    const auto tau = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P2, uniform_below(rng, arena.count_pure_stationary(Player::P2))));
    const auto play = sample_play(arena, sigma, tau, 0, 40, rng);
    play.validate(arena);
    for (std::size_t k = 0; k < play.length(); ++k) {
      CHECK(sgn(arena.probability(play.states[k], play.actions[k], play.states[k + 1])) > 0);
    }
  }
}

TEST_CASE("reach frequency in the coin arena") {
  const auto e3 = fixtures::e3_mean();
  const auto sigma = FiniteMemoryStrategy::from_pure(e3, first_action_strategy(e3, Player::P1));
  const auto tau = FiniteMemoryStrategy::from_pure(e3, first_action_strategy(e3, Player::P2));
  Rng rng(20240601);
  std::size_t hits = 0;
  const std::size_t n = 100'000;
  for (std::size_t i = 0; i < n; ++i) hits += sample_play(e3, sigma, tau, 0, 1, rng).target() == 2;
  // Exact probability 1/2; 0.005 is about 3.2 standard deviations.
  const double freq = double(hits) / n;
  CHECK(freq >= 0.495);
  CHECK(freq <= 0.505);
}

TEST_CASE("successor frequencies pass a chi-square test") {
  const auto arena = parse_arena(R"({
    "states": [{"name": "s", "owner": "P1"}, {"name": "a", "owner": "P1"}, {"name": "b", "owner": "P1"}, {"name": "c", "owner": "P1"}],
    "actions": [
      {"state": "s", "action": "x", "colour": 0, "successors": [{"state": "a", "prob": "1/2"}, {"state": "b", "prob": "1/3"}, {"state": "c", "prob": "1/6"}]},
      {"state": "a", "action": "x", "colour": 0, "successors": [{"state": "s", "prob": "1"}]},
      {"state": "b", "action": "x", "colour": 0, "successors": [{"state": "s", "prob": "1"}]},
      {"state": "c", "action": "x", "colour": 0, "successors": [{"state": "s", "prob": "1"}]}]
  })");
  const auto sigma = FiniteMemoryStrategy::from_pure(arena, first_action_strategy(arena, Player::P1));
  const auto tau = FiniteMemoryStrategy::from_pure(arena, first_action_strategy(arena, Player::P2));
  Rng rng(7);
  std::map<StateId, double> seen;
  const std::size_t n = 60'000;
  for (std::size_t i = 0; i < n; ++i) seen[sample_play(arena, sigma, tau, 0, 1, rng).target()] += 1;
  const double expect[] = {0, 1.0 / 2, 1.0 / 3, 1.0 / 6};
  double chi2 = 0;
  for (StateId t = 1; t <= 3; ++t) chi2 += std::pow(seen[t] - n * expect[t], 2) / (n * expect[t]);
  // Two degrees of freedom: 13.82 is the 0.999 quantile.
  CHECK(chi2 < 13.82);
}

TEST_CASE("weighted index sampling") {
  Rng rng(3);
  std::vector<Rational> w{Rational(1, 4), Rational(0), Rational(3, 4)};
  std::size_t counts[3] = {0, 0, 0};
  for (int i = 0; i < 40'000; ++i) counts[sample_index(w, rng)]++;
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] / 40'000.0 - 0.25) < 0.01);
}
