#pragma once

#include "spg/arena.hpp"
#include "spg/payoff.hpp"
#include "spg/report.hpp"
#include "spg/solve.hpp"
#include "spg/strategy.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spg {

struct HalfposBudget {
  std::uint64_t pairs = kDefaultPairBudget;
  /// Memory bound M of the finite-memory sweep.
  std::size_t memory = 2;
  /// Most finite-memory strategies examined; beyond it the sweep samples
  /// this many at random and the verdict is at best inconclusive.
  std::uint64_t sigmas = 100'000;
  std::uint64_t seed = 1;
};

/// Positional optimal strategy for P1.
///
/// For mean, discounted, parity, limsup and liminf the exact grid solver
/// certifies sigma* and the best response against it. For posavg,
/// optgenmean:k and meancobuchi:B the best guarantee of a pure
/// stationary sigma (exact inf over all P2 strategies) is compared with
/// every memory-M strategy of the sweep family: memory moves on (memory,
/// entered state) and P1 chooses per (memory, state). Any strategy whose
/// guarantee exceeds the pure one somewhere refutes the claim.
///
/// Refuses (UnsupportedSpec) specs not flagged shift-invariant and
/// submixing.
VerificationReport verify_halfpos(const Arena& arena, const PayoffSpec& spec, const HalfposBudget& budget = {});

struct WordBounds {
  /// Exhaustive part: every cycle up to this length over the alphabet, up
  /// to rotation, against every pattern (a, b) with 1 <= a, b <= max_block.
  std::size_t max_cycle = 4;
  std::size_t max_block = 3;
  /// Randomised part: lassos with prefixes, multi-block patterns.
  std::size_t random_cases = 10'000;
  std::size_t max_prefix = 3;
};

/// The alphabet used for a spec's searches (five letters for the scalar
/// and vector payoffs, two for geomfirstone).
std::vector<ColourToken> search_alphabet(const PayoffSpec& spec);

/// Looks for u, v and a pattern with f(shuffle) > max(f(u), f(v)).
VerificationReport search_submixing_violation(const PayoffSpec& spec, const WordBounds& bounds = {},
                                              std::uint64_t seed = 1);
/// Looks for a word whose value changes when its first letters are dropped.
VerificationReport search_shift_violation(const PayoffSpec& spec, const WordBounds& bounds = {},
                                          std::uint64_t seed = 1);

/// Builds the weakness set of sigma at epsilon, the reset strategy, and
/// checks that the reset strategy guarantees val(s) - 2 epsilon at every
/// reachable (memory, state). The same check on sigma itself and the
/// preconditions (sigma epsilon-optimal and locally optimal) are reported.
VerificationReport verify_subgame_perfect(const Arena& arena, const PayoffSpec& spec,
                                          const FiniteMemoryStrategy& sigma, const Rational& epsilon);
VerificationReport verify_subgame_perfect(const Arena& arena, const PayoffSpec& spec,
                                          const FiniteMemoryStrategy& sigma, const Rational& epsilon,
                                          const std::vector<Rational>& values);

/// First reachable (memory, state) whose guarantee is below val - 2 epsilon.
struct SubgameFailure {
  FiniteMemoryStrategy::Memory memory = 0;
  StateId state = 0;
  Rational guaranteed;
};
std::optional<SubgameFailure> subgame_failure(const Arena& arena, const PayoffSpec& spec,
                                              const FiniteMemoryStrategy& sigma, const Rational& epsilon,
                                              const std::vector<Rational>& values);

/// Run-length analysis of a pure P1 memory strategy on the counter-example
/// arena against the suffix-target payoff.
struct Fig1Analysis {
  /// 0: P2 can produce a word sharing a suffix with a b^2 a b^4 ...
  int payoff = 1;
  /// b-run lengths achievable from each memory state at s, up to the
  /// checked bound, and the (preperiod, period) of the run-length table.
  std::vector<std::vector<std::size_t>> achievable_runs;
  std::size_t preperiod = 0;
  std::size_t period = 1;
  /// Memory states that occur at s.
  std::vector<FiniteMemoryStrategy::Memory> reachable;
  /// For a winning P2: memory and phase where the matching starts.
  std::optional<std::pair<FiniteMemoryStrategy::Memory, std::size_t>> start;
};
Fig1Analysis analyse_fig1(const Arena& arena, const FiniteMemoryStrategy& sigma, std::size_t checked_runs = 60);

/// Probability that a fair coin at c1 completes a b-run of exactly length L:
/// h(0) = 1, h(1) = 1/2, h(L) = h(L-1)/2 + h(L-2)/2.
std::vector<Rational> fig1_random_run_probabilities(std::size_t max_length);

VerificationReport reproduce_counterexample();

/// Monte Carlo and exact martingale checks for locally-optimal pairs drawn
/// from the value-preserving actions, plus a value-decreasing P2.
VerificationReport doob_suite(const Arena& arena, const PayoffSpec& spec, std::size_t trials, std::uint64_t seed);

}  // namespace spg
