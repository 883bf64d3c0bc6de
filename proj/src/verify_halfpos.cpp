#include "spg/errors.hpp"
#include "spg/mdp.hpp"
#include "spg/random.hpp"
#include "spg/verify.hpp"

#include <chrono>

namespace spg {

namespace {

using Memory = FiniteMemoryStrategy::Memory;
using Clock = std::chrono::steady_clock;

nlohmann::json per_state(const Arena& arena, const std::vector<Rational>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (StateId s = 0; s < arena.num_states(); ++s) out[arena.state_name(s)] = to_string(values[s]);
  return out;
}

/// Member `code` of the Moore family: digits for the update table
/// (memory x entered state), then for the choices (memory x P1 state).
struct MooreFamily {
  const Arena& arena;
  std::size_t memory;
  std::vector<StateId> owned;
  std::uint64_t update_count = 1;
  std::uint64_t choice_count = 1;
  bool saturated = false;

  MooreFamily(const Arena& a, std::size_t m) : arena(a), memory(m) {
    auto mul = [&](std::uint64_t& acc, std::uint64_t k) {
      if (k != 0 && acc > UINT64_MAX / k) saturated = true;
      else acc *= k;
    };
    for (StateId s = 0; s < arena.num_states(); ++s) {
      for (std::size_t i = 0; i < memory; ++i) mul(update_count, memory);
      if (arena.owner(s) == Player::P1) {
        owned.push_back(s);
        for (std::size_t i = 0; i < memory; ++i) mul(choice_count, arena.num_actions(s));
      }
    }
  }

  std::uint64_t size() const {
    if (saturated || (choice_count != 0 && update_count > UINT64_MAX / choice_count)) return UINT64_MAX;
    return update_count * choice_count;
  }

  /// Decodes the update table only; true when memory states other than the
  /// initial one can be entered.
  std::vector<Memory> updates(std::uint64_t code) const {
    std::vector<Memory> table(memory * arena.num_states());
    for (auto& x : table) {
      x = static_cast<Memory>(code % memory);
      code /= memory;
    }
    return table;
  }

  bool uses_memory(const std::vector<Memory>& table) const {
    for (std::size_t t = 0; t < arena.num_states(); ++t) {
      if (table[t] != 0) return true;
    }
    return false;
  }

  /// False when some digit is never consulted from the initial memory and
  /// is not 0: such codes behave exactly like the one with that digit reset,
  /// so each behaviour is evaluated once.
  bool canonical(std::uint64_t code) const {
    const std::size_t n = arena.num_states();
    const auto table = updates(code % update_count);
    std::uint64_t rest = code / update_count;
    std::vector<ActionIndex> choice(memory * n, 0);
    for (Memory m = 0; m < memory; ++m) {
      for (StateId s : owned) {
        choice[m * n + s] = static_cast<ActionIndex>(rest % arena.num_actions(s));
        rest /= arena.num_actions(s);
      }
    }
    std::vector<bool> seen(memory * n, false), used_update(memory * n, false);
    std::vector<std::size_t> stack;
    for (StateId s = 0; s < n; ++s) {
      seen[s] = true;
      stack.push_back(s);
    }
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      const Memory m = static_cast<Memory>(v / n);
      const StateId s = static_cast<StateId>(v % n);
      for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
        if (arena.owner(s) == Player::P1 && a != choice[v]) continue;
        for (const auto& succ : arena.action(s, a).successors) {
          if (sgn(succ.prob) == 0) continue;
          used_update[m * n + succ.state] = true;
          const std::size_t w = table[m * n + succ.state] * n + succ.state;
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
    }
    for (std::size_t i = 0; i < memory * n; ++i) {
      if (!used_update[i] && table[i] != 0) return false;
      if (!seen[i] && choice[i] != 0) return false;
    }
    return true;
  }

  FiniteMemoryStrategy build(std::uint64_t code) const {
    const auto table = updates(code % update_count);
    std::uint64_t rest = code / update_count;
    std::vector<std::string> names;
    for (std::size_t m = 0; m < memory; ++m) names.push_back("m" + std::to_string(m));
    FiniteMemoryStrategy sigma(arena, Player::P1, names);
    sigma.set_updates([&](Memory m, PairIndex, StateId next) { return table[m * arena.num_states() + next]; });
    for (Memory m = 0; m < memory; ++m) {
      for (StateId s : owned) {
        sigma.set_pure_choice(m, s, static_cast<ActionIndex>(rest % arena.num_actions(s)));
        rest /= arena.num_actions(s);
      }
    }
    return sigma;
  }
};

VerificationReport both_positional(const Arena& arena, const PayoffSpec& spec, const HalfposBudget& budget) {
  VerificationReport report;
  const auto values = brute_force_value(arena, spec, budget.pairs);
  const auto response = best_response_min(arena, spec, values.sigma_star, budget.pairs);
  report.quantities["method"] = "exact pure stationary grid with saddle-point check";
  report.quantities["profiles"] = values.profiles;
  report.quantities["values"] = per_state(arena, values.values);
  report.quantities["sigma_star"] = pure_strategy_to_json(arena, values.sigma_star);
  report.quantities["best_response_values"] = per_state(arena, response.values);
  report.verdict = response.values == values.values ? Verdict::Confirmed : Verdict::Refuted;
  return report;
}

}  // namespace

VerificationReport verify_halfpos(const Arena& arena, const PayoffSpec& spec, const HalfposBudget& budget) {
  if (!spec.is_shift_invariant() || !spec.is_submixing()) {
    throw UnsupportedSpec("payoff " + spec.name() +
                          " is not flagged shift-invariant and submixing; search for a violation with "
                          "`check submixing` instead");
  }
  const auto started = Clock::now();
  VerificationReport report;
  if (spec.is_both_positional()) {
    report = both_positional(arena, spec, budget);
  } else {
    switch (spec.kind) {
      case PayoffKind::PositiveAverage:
      case PayoffKind::OptimisticGeneralizedMean:
      case PayoffKind::MeanCoBuchi: break;
      default: throw UnsupportedSpec("verify halfpos has no exact guarantee routine for " + spec.name());
    }
    const std::size_t n = arena.num_states();
    const std::uint64_t pure_count = arena.count_pure_stationary(Player::P1);
    if (pure_count > budget.pairs) throw BudgetExceeded("too many pure stationary strategies for P1");
    std::vector<Rational> best;
    PureStationaryStrategy best_sigma;
    std::optional<PureStationaryStrategy> uniform;
    std::vector<std::vector<Rational>> pure_values(pure_count);
    for (std::uint64_t i = 0; i < pure_count; ++i) {
      const auto sigma = pure_strategy_from_index(arena, Player::P1, i);
      auto g = p2_guarantee(arena, spec, FiniteMemoryStrategy::from_pure(arena, sigma));
      g.resize(n);
      if (best.empty()) {
        best = g;
      } else {
        for (std::size_t s = 0; s < n; ++s) best[s] = std::max(best[s], g[s]);
      }
      pure_values[i] = std::move(g);
    }
    for (std::uint64_t i = 0; i < pure_count && !uniform; ++i) {
      if (pure_values[i] == best) uniform = pure_strategy_from_index(arena, Player::P1, i);
    }

    const MooreFamily family(arena, budget.memory);
    const std::uint64_t total = family.size();
    const bool exhaustive = total <= budget.sigmas;
    const std::uint64_t examined = exhaustive ? total : budget.sigmas;
    Rng rng(budget.seed);
    std::uint64_t evaluated = 0;
    std::uint64_t skipped = 0;
    std::uint64_t duplicates = 0;
    std::optional<nlohmann::json> witness;
    for (std::uint64_t k = 0; k < examined && !witness; ++k) {
      std::uint64_t code = k;
      if (!exhaustive) {
        code = uniform_below(rng, family.update_count) +
               family.update_count * uniform_below(rng, family.choice_count);
      }
      if (!family.uses_memory(family.updates(code % family.update_count))) {
        ++skipped;
        continue;
      }
      if (!family.canonical(code)) {
        ++duplicates;
        continue;
      }
      const auto sigma = family.build(code);
      const auto g = p2_guarantee(arena, spec, sigma);
      ++evaluated;
      for (StateId s = 0; s < n; ++s) {
        if (g[sigma.initial() * n + s] > best[s]) {
          witness = nlohmann::json{{"sigma", strategy_to_json(arena, sigma)},
                                   {"state", arena.state_name(s)},
                                   {"memory_guarantee", to_string(g[sigma.initial() * n + s])},
                                   {"pure_guarantee", to_string(best[s])}};
          break;
        }
      }
    }
    report.quantities["method"] = "exact P2 infimum against each sigma; Moore memory sweep";
    report.quantities["memory_bound"] = budget.memory;
    report.quantities["pure_values"] = per_state(arena, best);
    report.quantities["uniform_pure_optimum"] = uniform.has_value();
    if (uniform) report.quantities["sigma_star"] = pure_strategy_to_json(arena, *uniform);
    report.quantities["family_size"] = total == UINT64_MAX ? std::string("overflow") : std::to_string(total);
    report.quantities["exhaustive"] = exhaustive;
    report.quantities["sigmas_evaluated"] = evaluated;
    report.quantities["sigmas_skipped_memoryless"] = skipped;
    report.quantities["sigmas_skipped_duplicate"] = duplicates;
    if (!exhaustive) report.quantities["seed"] = budget.seed;
    if (witness) {
      report.verdict = Verdict::Refuted;
      report.quantities["witness"] = *witness;
    } else if (!uniform) {
      // A positional optimum would attain the best pure guarantee everywhere.
      report.verdict = Verdict::Refuted;
      report.quantities["witness"] = "no single pure stationary strategy attains pure_values at every state";
    } else {
      report.verdict = exhaustive ? Verdict::Confirmed : Verdict::Inconclusive;
    }
  }
  report.claim = "halfpos";
  report.fingerprint = fingerprint(arena) + "/" + spec.name();
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

}  // namespace spg
