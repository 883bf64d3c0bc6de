#pragma once

#include "spg/arena.hpp"
#include "spg/payoff.hpp"
#include "spg/strategy.hpp"

#include <vector>

namespace spg {

/// inf over all P2 strategies of E^{sigma,tau}_s[f] when sigma starts in
/// memory m, indexed m * num_states + s.
///
/// Freezing sigma leaves a minimising MDP on (state, memory). For discounted
/// payoffs this is solved by policy iteration. For class-determined payoffs
/// the MDP is split into maximal end components. Inside a component P2 can
/// reach any behaviour the component allows, so its value is the least class
/// value over P2's pure stationary choices within it. Mean-based payoffs
/// get it from a linear program over long-run action frequencies (for
/// optgenmean: 0 iff the hull of the class mean vectors meets the open
/// negative orthant); parity, limsup and liminf enumerate the choices.
/// Components are then collapsed and the stopping problem solved by policy
/// iteration.
///
/// Supported: mean, discounted, parity, limsup, liminf, posavg, meancobuchi,
/// optgenmean:k. Other payoffs throw UnsupportedSpec.
std::vector<Rational> p2_guarantee(const Arena& arena, const PayoffSpec& spec, const FiniteMemoryStrategy& sigma);

}  // namespace spg
