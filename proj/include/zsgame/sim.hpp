#pragma once

#include "zsgame/model.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace zsgame {

/**
 * T-step game value by direct backward enumeration.
 *
 * Deliberately independent of apply_bellman: the stage matrix is
 * materialized with the y-sum accumulated in reverse state order, then
 * scanned for the minimizer's worst case. Serves as the reference the
 * operator implementation is checked against. Guarded to small problems:
 * throws std::invalid_argument when |X|*|U|*|V|*T exceeds 10^7.
 */
numvec oracle_game_value(const GameModel& model, const numvec& terminal,
                         std::size_t horizon);

/** One simulated play-through under canonical optimal strategies. */
struct TrajectorySample {
    std::vector<std::size_t> states;                          // x_0 .. x_T
    std::vector<std::pair<std::size_t, std::size_t>> actions; // (u_t, v_t), t < T
    double realized_cost = 0.0; // sum of stage costs plus terminal at x_T
};

/**
 * Monte Carlo rollout under the strategies of the T-step game.
 *
 * At play-step t both players follow the canonical pair of the equilibrium
 * set at the continuation value B^(T-t-1)(terminal). Transitions are drawn
 * by inverse CDF over rho(u,v,x,.) * pi in state order, so a zero-mass move
 * is never emitted. Trajectory j uses the counter stream seeded with
 * seed + j; runs are reproducible bit for bit. occupation[t][x] is the
 * fraction of the n trajectories sitting at x at time t (each row sums
 * to 1), and lambda_hat the mean realized cost divided by the horizon.
 */
struct RolloutResult {
    std::vector<TrajectorySample> trajectories;
    std::vector<numvec> occupation;
    double lambda_hat = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

RolloutResult rollout(const GameModel& model, const numvec& terminal, std::size_t horizon,
                      std::size_t initial_state, std::size_t n, std::uint64_t seed,
                      double tie_tol = 1e-9);

/** Rollout with x_0 drawn per trajectory from an initial distribution. */
RolloutResult rollout(const GameModel& model, const numvec& terminal, std::size_t horizon,
                      const numvec& initial_distribution, std::size_t n, std::uint64_t seed,
                      double tie_tol = 1e-9);

} // namespace zsgame
