#pragma once

#include "spg/arena.hpp"
#include "spg/strategy.hpp"

namespace spg::fixtures {

/// s (P1): "stay" loops with reward 0, "go" moves to t; t loops with
/// reward 1. val = 1 everywhere; staying forever is locally but not
/// globally optimal.
Arena e2();
/// Memory m0 plays go, m1 plays stay; memory never changes.
FiniteMemoryStrategy e2_weak_sigma(const Arena& arena);

/// s moves to t or u with probability 1/2 each; t and u are absorbing.
/// Mean colours: s 0, t 0, u 2.
Arena e3_mean();
/// Priority colours: s 0, t 2, u 1.
Arena e3_parity();

/// Reset fixture. s (P1): "stay" loops with reward 0, "go" moves to t with
/// reward 1. t moves to s with probability 7/8 and to u with 1/8; u moves
/// back to s. Both pay 1.
Arena e4();
/// Four memories: m0 plays go; leaving t for s moves to m2 (go forever),
/// leaving t for u moves to m3, and leaving u from m3 moves to m1 (stay
/// forever). Starting at u goes straight to m2. Guarantees at least 7/8 from
/// every (m0, s), so it is 1/8-optimal, while (m1, s) only guarantees 0.
FiniteMemoryStrategy e4_sigma(const Arena& arena);

/// The two-player counter-example: P2's square state s (silent colour)
/// with action "1" to c1 and "2" to c3; c1 (colour b) with action "1" back
/// to s and "2" to c2; c2 (colour b) and c3 (colour a) return to s.
Arena fig1();
/// P1 plays the given action name at c1 forever.
FiniteMemoryStrategy fig1_stationary(const Arena& arena, const std::string& action);
/// Alternates "1", "2", "1", ... at successive visits to c1 and restarts
/// with "1" after every a.
FiniteMemoryStrategy fig1_alternating(const Arena& arena);
/// Alternates at successive visits to c1 without ever restarting.
FiniteMemoryStrategy fig1_alternating_no_reset(const Arena& arena);

/// Small counter game: P1 at s chooses "down" (increment -1 and back) or
/// "coin" to a P2 state that can add +1 or gamble on +2/-2. No claim is
/// attached; it exercises the counter payoffs.
Arena one_counter();

}  // namespace spg::fixtures
