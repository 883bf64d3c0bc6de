#include "support.hpp"

#include "spg/chain.hpp"
#include "spg/fixtures.hpp"
#include "spg/play.hpp"

#include <doctest.h>

#include <cmath>

using namespace spg;

namespace {

FiniteMemoryStrategy first(const Arena& arena, Player p) {
  return FiniteMemoryStrategy::from_pure(arena, first_action_strategy(arena, p));
}

InducedChain unique_chain(const Arena& arena) {
  return induce_chain(arena, first(arena, Player::P1), first(arena, Player::P2));
}

Rational row_prob(const InducedChain& chain, NodeId from, NodeId to) {
  for (const auto& [t, p] : chain.rows[from]) {
    if (t == to) return p;
  }
  return 0;
}

}  // namespace

TEST_CASE("induced chains of the small fixtures") {
  const auto loop = parse_arena(R"({"states": [{"name": "s", "owner": "P1"}],
    "actions": [{"state": "s", "action": "a", "colour": 3, "successors": [{"state": "s", "prob": "1"}]}]})");
  const auto c1 = unique_chain(loop);
  CHECK(c1.size() == 1);
  CHECK(c1.rows[0] == std::vector<std::pair<NodeId, Rational>>{{0, Rational(1)}});

  const auto e3 = fixtures::e3_mean();
  const auto c3 = unique_chain(e3);
  CHECK(c3.size() == 3);
  CHECK(c3.rows[0] == std::vector<std::pair<NodeId, Rational>>{{1, Rational(1, 2)}, {2, Rational(1, 2)}});
}

TEST_CASE("product chain for the alternating strategy") {
  const auto arena = fixtures::fig1();
  const auto sigma = fixtures::fig1_alternating(arena);
  const auto tau = first(arena, Player::P2);  // always action "1" to c1
  const auto chain = induce_chain(arena, sigma, tau);
  REQUIRE(chain.size() == 8);
  const StateId s = *arena.find_state("s"), c1 = *arena.find_state("c1"), c2 = *arena.find_state("c2"),
                c3 = *arena.find_state("c3");
  // Built by hand: memory 0 plays "1" at c1 and flips to 1; memory 1 plays
  // "2" and flips back; entering c3 resets to 0.
  CHECK(row_prob(chain, chain.node(c1, 0, 0), chain.node(s, 1, 0)) == 1);
  CHECK(row_prob(chain, chain.node(c1, 1, 0), chain.node(c2, 0, 0)) == 1);
  CHECK(row_prob(chain, chain.node(s, 1, 0), chain.node(c1, 1, 0)) == 1);
  CHECK(row_prob(chain, chain.node(c2, 0, 0), chain.node(s, 0, 0)) == 1);
  CHECK(row_prob(chain, chain.node(c3, 1, 0), chain.node(s, 1, 0)) == 1);
  for (NodeId n = 0; n < chain.size(); ++n) {
    Rational total = 0;
    for (const auto& [t, p] : chain.rows[n]) total += p;
    CHECK(total == 1);
  }
  // P2 sending play to c3 resets the memory on entry.
  const auto to_c3 = FiniteMemoryStrategy::from_pure(
      arena, PureStationaryStrategy{Player::P2, {*arena.find_action(s, "2"), {}, {}, {}}});
  const auto reset = induce_chain(arena, sigma, to_c3);
  CHECK(row_prob(reset, reset.node(s, 1, 0), reset.node(c3, 0, 0)) == 1);
}

TEST_CASE("bottom classes") {
  const auto loop = parse_arena(R"({"states": [{"name": "s", "owner": "P1"}],
    "actions": [{"state": "s", "action": "a", "colour": 3, "successors": [{"state": "s", "prob": "1"}]}]})");
  const auto one = bottom_sccs(loop, unique_chain(loop));
  REQUIRE(one.size() == 1);
  CHECK(one[0].stationary == std::vector<Rational>{1});

  const auto e3 = fixtures::e3_mean();
  const auto two = bottom_sccs(e3, unique_chain(e3));
  REQUIRE(two.size() == 2);
  for (const auto& c : two) CHECK(c.stationary == std::vector<Rational>{1});

  const auto pair = parse_arena(R"({
    "states": [{"name": "x", "owner": "P1"}, {"name": "y", "owner": "P1"}],
    "actions": [
      {"state": "x", "action": "a", "colour": 0, "successors": [{"state": "y", "prob": "1"}]},
      {"state": "y", "action": "a", "colour": 0, "successors": [{"state": "x", "prob": "1/2"}, {"state": "y", "prob": "1/2"}]}]
  })");
  const auto c = bottom_sccs(pair, unique_chain(pair));
  REQUIRE(c.size() == 1);
  CHECK(c[0].nodes == std::vector<NodeId>{0, 1});
  CHECK(c[0].stationary == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
}

TEST_CASE("absorption probabilities") {
  const auto e3 = fixtures::e3_mean();
  const auto chain = unique_chain(e3);
  const auto classes = bottom_sccs(e3, chain);
  CHECK(absorption(chain, classes, 0) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto inside = absorption(chain, classes, classes[k].nodes[0]);
    CHECK(inside[k] == 1);
  }

  const auto gadget = parse_arena(R"({
    "states": [{"name": "s", "owner": "P1"}, {"name": "t", "owner": "P1"}, {"name": "u", "owner": "P1"}],
    "actions": [
      {"state": "s", "action": "a", "colour": 0, "successors": [{"state": "s", "prob": "1/3"}, {"state": "t", "prob": "1/3"}, {"state": "u", "prob": "1/3"}]},
      {"state": "t", "action": "a", "colour": 0, "successors": [{"state": "t", "prob": "1"}]},
      {"state": "u", "action": "a", "colour": 0, "successors": [{"state": "u", "prob": "1"}]}]
  })");
  const auto g = unique_chain(gadget);
  CHECK(absorption(g, bottom_sccs(gadget, g), 0) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("discounted values") {
  const auto loop = parse_arena(R"({"states": [{"name": "s", "owner": "P1"}],
    "actions": [{"state": "s", "action": "a", "colour": {"reward": "1", "discount": "1/2"}, "successors": [{"state": "s", "prob": "1"}]}]})");
  CHECK(discounted_values(loop, unique_chain(loop)) == std::vector<Rational>{2});

  const auto cycle = parse_arena(R"({
    "states": [{"name": "x", "owner": "P1"}, {"name": "y", "owner": "P1"}],
    "actions": [
      {"state": "x", "action": "a", "colour": {"reward": "1", "discount": "1/2"}, "successors": [{"state": "y", "prob": "1"}]},
      {"state": "y", "action": "a", "colour": {"reward": "0", "discount": "1/2"}, "successors": [{"state": "x", "prob": "1"}]}]
  })");
  CHECK(discounted_values(cycle, unique_chain(cycle)) == std::vector<Rational>{Rational(4, 3), Rational(2, 3)});

  for (std::uint64_t i = 0; i < 50; ++i) {
    auto p = corpus_params(testing::kCorpusSeed, i, 4, 3, ColourKind::Discounted);
    p.discount = 0;
    const auto arena = random_arena(p).arena;
    const auto v = discounted_values(arena, unique_chain(arena));
    for (StateId s = 0; s < arena.num_states(); ++s) CHECK(v[s] == scalar_of(arena.colour(s, 0)));
  }
}

TEST_CASE("discounted values match the truncated series") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto p = corpus_params(testing::kCorpusSeed, i, 4, 3, ColourKind::Discounted);
    p.discount = make_rational(1, 2);
    const auto arena = random_arena(p).arena;
    const auto chain = unique_chain(arena);
    const auto v = discounted_values(arena, chain);
    // Distribution over nodes after k steps, accumulated with weight 2^-k.
    std::vector<double> dist(chain.size(), 0.0);
    dist[0] = 1;
    double total = 0, weight = 1;
    const int depth = 50;
    for (int k = 0; k < depth; ++k) {
      std::vector<double> next(chain.size(), 0.0);
      for (NodeId n = 0; n < chain.size(); ++n) {
        if (dist[n] == 0) continue;
        total += weight * dist[n] * to_double(scalar_of(arena.colour(chain.nodes[n].state, 0)));
        for (const auto& [t, pr] : chain.rows[n]) next[t] += dist[n] * to_double(pr);
      }
      dist = next;
      weight /= 2;
    }
    // Tail bound lambda^N * R / (1 - lambda) with R = 2.
    CHECK(std::abs(total - to_double(v[0])) <= std::ldexp(1.0, -depth) * 4 + 1e-12);
  }
}

TEST_CASE("stationary laws and absorption on the corpus") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto arena = testing::corpus_arena(i, ColourKind::Reward);
    Rng rng(i);
    const auto sigma = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P1, uniform_below(rng, arena.count_pure_stationary(Player::P1))));
    const auto tau = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P2, uniform_below(rng, arena.count_pure_stationary(Player::P2))));
    const auto chain = induce_chain(arena, sigma, tau);
    const auto classes = bottom_sccs(arena, chain);
    REQUIRE_FALSE(classes.empty());
    for (const auto& c : classes) {
      // pi P = pi on the class, exactly.
      for (std::size_t a = 0; a < c.nodes.size(); ++a) {
        Rational inflow = 0;
        for (std::size_t b = 0; b < c.nodes.size(); ++b) inflow += c.stationary[b] * row_prob(chain, c.nodes[b], c.nodes[a]);
        REQUIRE(inflow == c.stationary[a]);
        REQUIRE(sgn(c.stationary[a]) > 0);
      }
    }
    for (NodeId n = 0; n < chain.size(); ++n) REQUIRE(sum(absorption(chain, classes, n)) == 1);
  }
}

TEST_CASE("sampled absorption frequencies") {
  std::size_t compared = 0;
  for (std::uint64_t i = 0; i < 200 && compared < 10; ++i) {
    const auto arena = testing::corpus_arena(i, ColourKind::Reward);
    Rng pick(i);
    const auto sigma = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P1, uniform_below(pick, arena.count_pure_stationary(Player::P1))));
    const auto tau = FiniteMemoryStrategy::from_pure(
        arena, pure_strategy_from_index(arena, Player::P2, uniform_below(pick, arena.count_pure_stationary(Player::P2))));
    const auto chain = induce_chain(arena, sigma, tau);
    const auto classes = bottom_sccs(arena, chain);
    if (classes.size() < 2) continue;
    const auto exact = absorption(chain, classes, 0);
    std::vector<std::size_t> class_of(chain.size(), classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (NodeId n : classes[c].nodes) class_of[n] = c;
    }
    Rng rng(derive_seed(testing::kCorpusSeed, 40 + i));
    const std::size_t runs = 10'000;
    std::vector<double> hits(classes.size() + 1, 0);
    for (std::size_t r = 0; r < runs; ++r) hits[class_of[sample_play(arena, sigma, tau, 0, 200, rng).target()]] += 1;
    CHECK(hits[classes.size()] == 0);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double p = to_double(exact[c]);
      const double sd = std::sqrt(p * (1 - p) / runs);
      CHECK(std::abs(hits[c] / runs - p) <= 3 * sd + 1e-12);
    }
    ++compared;
  }
  CHECK(compared > 0);
}

TEST_CASE("missing memory updates") {
  const auto arena = fixtures::e2();
  FiniteMemoryStrategy partial(arena, Player::P1, {"m0", "m1"});
  partial.set_pure_choice(0, 0, 0);
  partial.set_pure_choice(1, 0, 0);
  try {
    induce_chain(arena, partial, first(arena, Player::P2));
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("not total") != std::string::npos);
  }
}
