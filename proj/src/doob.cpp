#include "spg/errors.hpp"
#include "spg/random.hpp"
#include "spg/verify.hpp"

#include <chrono>

namespace spg {

namespace {

/// Pure stationary strategy for `player` picking uniformly among the
/// actions accepted by `keep`; falls back to every action when none is.
template <class Keep>
PureStationaryStrategy random_choice(const Arena& arena, Player player, Rng& rng, Keep&& keep) {
  PureStationaryStrategy out{player, std::vector<std::optional<ActionIndex>>(arena.num_states())};
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (arena.owner(s) != player) continue;
    std::vector<ActionIndex> pool;
    for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
      if (keep(s, a)) pool.push_back(a);
    }
    if (pool.empty()) {
      for (ActionIndex a = 0; a < arena.num_actions(s); ++a) pool.push_back(a);
    }
    out.choice[s] = pool[uniform_below(rng, pool.size())];
  }
  return out;
}

nlohmann::json estimate_json(const McEstimate& e, const Rational& exact) {
  return {{"mean", e.mean},         {"half_width", e.half_width}, {"runs", e.runs},
          {"absorbed", e.absorbed}, {"exact", to_string(exact)},  {"covers", e.covers(to_double(exact))}};
}

}  // namespace

VerificationReport doob_suite(const Arena& arena, const PayoffSpec& spec, std::size_t trials, std::uint64_t seed) {
  if (!spec.is_shift_invariant() || !spec.is_both_positional()) {
    throw UnsupportedSpec("doob suite needs a shift-invariant spec with exact values: " + spec.name());
  }
  if (trials == 0) throw ValidationError("trials must be positive");
  const auto started = std::chrono::steady_clock::now();
  const auto value = brute_force_value(arena, spec);
  const auto& val = value.values;
  const auto cls = classify_actions(arena, val);
  Rng rng(seed);

  auto preserving = [&](StateId s, ActionIndex a) { return cls.at(arena, s, a).value_preserving; };
  const auto sigma = FiniteMemoryStrategy::from_pure(arena, random_choice(arena, Player::P1, rng, preserving));
  const auto tau = FiniteMemoryStrategy::from_pure(arena, random_choice(arena, Player::P2, rng, preserving));
  // P2 plays a value-changing action wherever it has one.
  const auto adversary = FiniteMemoryStrategy::from_pure(
      arena, random_choice(arena, Player::P2, rng, [&](StateId s, ActionIndex a) { return !preserving(s, a); }));

  VerificationReport report;
  report.claim = "doob";
  report.fingerprint = fingerprint(arena) + "/" + spec.name();
  report.quantities["values"] = nlohmann::json::array();
  for (const auto& v : val) report.quantities["values"].push_back(to_string(v));
  report.quantities["sigma"] = strategy_to_json(arena, sigma);
  report.quantities["tau"] = strategy_to_json(arena, tau);
  report.quantities["adversary"] = strategy_to_json(arena, adversary);

  bool exact_ok = true;
  std::size_t estimates = 0, misses = 0;
  nlohmann::json per_source = nlohmann::json::array();
  const std::size_t horizon = 3 * arena.num_states();

  for (StateId source = 0; source < arena.num_states(); ++source) {
    nlohmann::json entry{{"source", arena.state_name(source)}};
    const auto mart = martingale_check(arena, val, sigma, tau, source);
    const auto sub = martingale_check(arena, val, sigma, adversary, source);
    entry["martingale_equality"] = mart.is_martingale();
    entry["adversary_submartingale"] = sub.is_submartingale();
    entry["adversary_strict_nodes"] = sub.strict.size();
    exact_ok = exact_ok && mart.is_martingale() && sub.is_submartingale();

    const auto stream = derive_seed(seed, source);
    const auto zero = stopped_value_mc(arena, val, sigma, tau, source, StoppingRule::at_horizon(0), 1, stream);
    entry["horizon_0_exact"] = zero.mean == to_double(val[source]);
    exact_ok = exact_ok && zero.mean == to_double(val[source]);

    std::vector<bool> target(arena.num_states(), false);
    for (StateId t = 0; t < arena.num_states(); ++t) target[t] = t != source && uniform_below(rng, 2) == 0;
    const auto hit = stopped_value_mc(arena, val, sigma, tau, source, StoppingRule::first_hit(target), trials,
                                      derive_seed(stream, 1));
    const auto fixed = stopped_value_mc(arena, val, sigma, tau, source, StoppingRule::at_horizon(horizon), trials,
                                        derive_seed(stream, 2));
    const auto adv = stopped_value_mc(arena, val, sigma, adversary, source, StoppingRule::at_horizon(horizon),
                                      trials, derive_seed(stream, 3));
    entry["first_hit"] = estimate_json(hit, val[source]);
    entry["horizon"] = estimate_json(fixed, val[source]);
    const bool adv_ok = adv.mean + adv.half_width + 1e-9 * (1 + std::abs(adv.mean)) >= to_double(val[source]);
    entry["adversary_horizon"] = estimate_json(adv, val[source]);
    entry["adversary_above_value"] = adv_ok;
    estimates += 3;
    misses += !hit.covers(to_double(val[source])) + !fixed.covers(to_double(val[source])) + !adv_ok;
    per_source.push_back(entry);
  }

  // Value-changing actions are played finitely often: in the chain of
  // sigma against the adversary no recurrent node plays one.
  const auto chain = induce_chain(arena, sigma, adversary);
  bool recurrent_stable = true;
  for (const auto& c : bottom_sccs(arena, chain)) {
    for (NodeId v : c.nodes) {
      for (const auto& [a, w] : chain.action_weights[v]) {
        if (sgn(w) > 0 && !preserving(chain.nodes[v].state, a)) recurrent_stable = false;
      }
    }
  }
  exact_ok = exact_ok && recurrent_stable;

  report.quantities["per_source"] = per_source;
  report.quantities["trials"] = trials;
  report.quantities["horizon"] = horizon;
  report.quantities["estimates"] = estimates;
  report.quantities["ci_misses"] = misses;
  report.quantities["value_changing_only_transient"] = recurrent_stable;
  report.verdict = !exact_ok ? Verdict::Refuted : misses > 0 ? Verdict::Inconclusive : Verdict::Confirmed;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace spg
