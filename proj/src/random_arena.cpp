#include "spg/arena.hpp"
#include "spg/random.hpp"

#include <algorithm>

namespace spg {

namespace {

ColourToken draw_colour(Rng& rng, const RandomArenaParams& p) {
  const auto span = static_cast<std::uint64_t>(p.colour_max - p.colour_min + 1);
  auto draw = [&] { return p.colour_min + static_cast<long>(uniform_below(rng, span)); };
  switch (p.kind) {
    case ColourKind::Reward: return Reward{Rational(draw())};
    case ColourKind::Discounted: return DiscountedReward{Rational(draw()), p.discount};
    case ColourKind::Priority: return Priority{draw() - p.colour_min};
    case ColourKind::Vector: {
      RewardVector v;
      for (std::size_t i = 0; i < p.dimension; ++i) v.values.emplace_back(draw());
      return v;
    }
    case ColourKind::Letter: return Letter{std::string(1, static_cast<char>('a' + (draw() - p.colour_min) % 26))};
    case ColourKind::Increment: return Increment{draw()};
    case ColourKind::FlaggedReward: {
      const long r = draw();
      return FlaggedReward{Rational(r), uniform_below(rng, 4) == 0};
    }
  }
  return Reward{Rational(0)};
}

}  // namespace

RandomArena random_arena(RandomArenaParams params) {
  RandomArena out;
  if (params.num_states < 1) {
    out.clamped.push_back("num_states " + std::to_string(params.num_states) + " clamped to 1");
    params.num_states = 1;
  }
  if (params.max_actions < 1) {
    out.clamped.push_back("max_actions " + std::to_string(params.max_actions) + " clamped to 1");
    params.max_actions = 1;
  }
  if (params.colour_min > params.colour_max) {
    out.clamped.push_back("colour range reversed; swapped");
    std::swap(params.colour_min, params.colour_max);
  }
  if (params.density < 0) {
    out.clamped.push_back("density " + to_string(params.density) + " clamped to 0");
    params.density = 0;
  } else if (params.density > 1) {
    out.clamped.push_back("density " + to_string(params.density) + " clamped to 1");
    params.density = 1;
  }
  if (params.kind == ColourKind::Vector && params.dimension < 1) {
    out.clamped.push_back("vector dimension clamped to 1");
    params.dimension = 1;
  }
  if (params.kind == ColourKind::Discounted && (params.discount < 0 || params.discount >= 1)) {
    out.clamped.push_back("discount " + to_string(params.discount) + " clamped to 1/2");
    params.discount = Rational(1, 2);
  }

  Rng shape(params.seed);
  Rng colours(derive_seed(params.seed, 0xC0105));
  const auto n = params.num_states;
  const auto density_num = params.density.get_num().get_ui();
  const auto density_den = params.density.get_den().get_ui();

  std::vector<StateEntry> states(n);
  for (std::size_t s = 0; s < n; ++s) {
    states[s].name = "s" + std::to_string(s);
    states[s].owner = uniform_below(shape, 2) == 0 ? Player::P1 : Player::P2;
  }
  for (std::size_t s = 0; s < n; ++s) {
    const auto k = 1 + uniform_below(shape, params.max_actions);
    for (std::size_t a = 0; a < k; ++a) {
      ActionEntry act;
      act.name = "a" + std::to_string(a);
      const auto forced = uniform_below(shape, n);
      std::vector<std::pair<StateId, long>> weights;
      for (std::size_t t = 0; t < n; ++t) {
        const bool include = t == forced || uniform_below(shape, density_den) < density_num;
        if (include) weights.emplace_back(static_cast<StateId>(t), 1 + static_cast<long>(uniform_below(shape, 3)));
      }
      long total = 0;
      for (const auto& [t, w] : weights) total += w;
      for (const auto& [t, w] : weights) act.successors.push_back({t, make_rational(w, total)});
      act.colour = draw_colour(colours, params);
      states[s].actions.push_back(std::move(act));
    }
  }
  out.arena = Arena::build(std::move(states));
  return out;
}

RandomArenaParams corpus_params(std::uint64_t root_seed, std::uint64_t index, std::size_t max_states,
                                std::size_t max_actions, ColourKind kind) {
  Rng rng(derive_seed(root_seed, index));
  RandomArenaParams p;
  p.num_states = 1 + uniform_below(rng, max_states);
  p.max_actions = 1 + uniform_below(rng, max_actions);
  p.seed = rng();
  p.kind = kind;
  return p;
}

}  // namespace spg
