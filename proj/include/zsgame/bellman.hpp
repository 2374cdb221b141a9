#pragma once

#include "zsgame/model.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace zsgame {

/**
 * One-step dynamic programming operator.
 *
 * (BS)(x) = min over u of max over v of
 *     sum over y of (g(u,v,x,y) + s[y]) * rho(u,v,x,y) * pi[y],
 * the inner sum accumulated left to right in state order so results are
 * reproducible bit for bit. Homogeneous (B(s + a) = a + B(s)) and
 * non-expansive in the sup norm.
 */
numvec apply_bellman(const GameModel& model, const numvec& s);

/** Half the spread: quotient seminorm (max - min) / 2. Zero iff s is constant. */
double quotient_norm(const numvec& s);

/** Centers s so max = -min; the canonical representative of its quotient class. */
numvec project(const numvec& s);

/** Quotient seminorm of the difference; invariant under constant shifts of either side. */
double quotient_distance(const numvec& a, const numvec& b);

/**
 * Per-state sets of near-optimal action pairs of the one-step game at s.
 *
 * A pair (u, v) belongs to per_state[x] iff u's row max is within
 * tie_tolerance of the least row max at x, and v attains u's row max within
 * tie_tolerance. canonical[x] is the flagged representative: the lowest such
 * u, then the lowest v for that u. Sets are sorted by (u, v) and are exactly
 * invariant under adding a constant to s.
 */
struct EquilibriumSet {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> per_state;
    std::vector<std::pair<std::size_t, std::size_t>> canonical;
    double tie_tolerance = 1e-9;
};

EquilibriumSet equilibrium_set(const GameModel& model, const numvec& s,
                               double tie_tol = 1e-9);

/** Value iterates V_0 = start, V_k = B(V_{k-1}), k = 0..count. Unprojected. */
std::vector<numvec> bellman_iterates(const GameModel& model, const numvec& start,
                                     std::size_t count);

} // namespace zsgame
