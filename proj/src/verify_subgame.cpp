#include "spg/constructions.hpp"
#include "spg/errors.hpp"
#include "spg/verify.hpp"

#include <chrono>

namespace spg {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json pair_json(const Arena& arena, const FiniteMemoryStrategy& sigma, std::size_t index,
                         const Rational& value) {
  const std::size_t n = arena.num_states();
  return {{"memory", sigma.memory_name(static_cast<FiniteMemoryStrategy::Memory>(index / n))},
          {"state", arena.state_name(static_cast<StateId>(index % n))},
          {"guaranteed", to_string(value)}};
}

}  // namespace

std::optional<SubgameFailure> subgame_failure(const Arena& arena, const PayoffSpec& spec,
                                              const FiniteMemoryStrategy& sigma, const Rational& epsilon,
                                              const std::vector<Rational>& values) {
  const auto guaranteed = product_values(arena, spec, sigma);
  const auto reach = reachable_pairs(arena, sigma);
  const std::size_t n = arena.num_states();
  for (std::size_t i = 0; i < guaranteed.size(); ++i) {
    if (reach[i] && guaranteed[i] < values[i % n] - 2 * epsilon) {
      return SubgameFailure{static_cast<FiniteMemoryStrategy::Memory>(i / n), static_cast<StateId>(i % n),
                            guaranteed[i]};
    }
  }
  return std::nullopt;
}

VerificationReport verify_subgame_perfect(const Arena& arena, const PayoffSpec& spec,
                                          const FiniteMemoryStrategy& sigma, const Rational& epsilon,
                                          const std::vector<Rational>& values) {
  const auto started = Clock::now();
  if (sgn(epsilon) < 0) throw ValidationError("epsilon must be non-negative");
  sigma.validate(arena);
  VerificationReport report;
  report.claim = "subgame-perfect";
  report.fingerprint = fingerprint(arena) + "/" + spec.name() + "/eps=" + to_string(epsilon);
  const std::size_t n = arena.num_states();

  const auto weak = weakness_set(arena, spec, sigma, epsilon, values);
  const auto hat = reset_strategy(arena, sigma, weak);
  const auto hat_values = product_values(arena, spec, hat);
  const auto hat_reach = reachable_pairs(arena, hat);

  bool eps_optimal = true;
  for (StateId s = 0; s < n; ++s) {
    if (weak.guaranteed[sigma.initial() * n + s] < values[s] - epsilon) eps_optimal = false;
  }
  const auto cls = classify_actions(arena, values);
  nlohmann::json weak_pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < weak.weak.size(); ++i) {
    if (weak.weak[i]) weak_pairs.push_back(pair_json(arena, sigma, i, weak.guaranteed[i]));
  }
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t i = 0; i < hat_values.size(); ++i) {
    if (hat_reach[i] && hat_values[i] < values[i % n] - 2 * epsilon) {
      failures.push_back(pair_json(arena, hat, i, hat_values[i]));
    }
  }
  const auto base_failure = subgame_failure(arena, spec, sigma, epsilon, values);

  nlohmann::json vals = nlohmann::json::object();
  for (StateId s = 0; s < n; ++s) vals[arena.state_name(s)] = to_string(values[s]);
  report.quantities["epsilon"] = to_string(epsilon);
  report.quantities["values"] = vals;
  report.quantities["sigma_epsilon_optimal"] = eps_optimal;
  report.quantities["sigma_locally_optimal"] = is_locally_optimal(arena, cls, sigma);
  report.quantities["weak_pairs"] = weak_pairs;
  report.quantities["base_sigma_passes"] = !base_failure.has_value();
  if (base_failure) {
    report.quantities["base_sigma_failure"] =
        pair_json(arena, sigma, base_failure->memory * n + base_failure->state, base_failure->guaranteed);
  }
  report.quantities["reset_strategy"] = strategy_to_json(arena, hat);
  report.quantities["reset_failures"] = failures;
  report.verdict = failures.empty() ? Verdict::Confirmed : Verdict::Refuted;
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

VerificationReport verify_subgame_perfect(const Arena& arena, const PayoffSpec& spec,
                                          const FiniteMemoryStrategy& sigma, const Rational& epsilon) {
  return verify_subgame_perfect(arena, spec, sigma, epsilon, brute_force_value(arena, spec).values);
}

}  // namespace spg
