#include "zsgame/sim.hpp"

#include "zsgame/bellman.hpp"
#include "zsgame/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zsgame {

namespace {

// Inverse-CDF draw over masses in state order. Never lands on a zero mass:
// the cumulative sum does not move across such entries, so the strict
// comparison cannot fire there; rounding shortfall at the top falls back to
// the last positive entry.
std::size_t draw_index(const numvec& masses, double r) {
    double cum = 0.0;
    std::size_t last_positive = masses.size();
    for (std::size_t y = 0; y < masses.size(); ++y) {
        if (masses[y] > 0.0) last_positive = y;
        cum += masses[y];
        if (masses[y] > 0.0 && r < cum) return y;
    }
    if (last_positive == masses.size())
        throw std::invalid_argument("draw_index: all masses are zero");
    return last_positive;
}

} // namespace

numvec oracle_game_value(const GameModel& model, const numvec& terminal,
                         std::size_t horizon) {
    const std::size_t nx = model.n_states();
    const std::size_t nu = model.n_u();
    const std::size_t nv = model.n_v();
    if (terminal.size() != nx)
        throw std::invalid_argument("oracle_game_value: terminal has " +
                                    std::to_string(terminal.size()) + " entries for " +
                                    std::to_string(nx) + " states");
    const double work = static_cast<double>(nx) * static_cast<double>(nu) *
                        static_cast<double>(nv) * static_cast<double>(horizon);
    if (work > 1e7)
        throw std::invalid_argument("oracle_game_value: |X|*|U|*|V|*T = " +
                                    std::to_string(work) + " exceeds 10^7");

    // Backward enumeration kept independent of the production operator: the
    // full stage matrix is materialized with the expectation accumulated in
    // reverse state order, then reduced with element scans.
    numvec value = terminal;
    std::vector<numvec> stage(nu, numvec(nv));
    numvec row_worst(nu);
    for (std::size_t step = 0; step < horizon; ++step) {
        numvec next(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t v = 0; v < nv; ++v) {
                    double acc = 0.0;
                    for (std::size_t yi = nx; yi-- > 0;)
                        acc += (model.cost(u, v, x, yi) + value[yi]) *
                               model.rho(u, v, x, yi) * model.states.pi[yi];
                    stage[u][v] = acc;
                }
            for (std::size_t u = 0; u < nu; ++u)
                row_worst[u] = *std::max_element(stage[u].begin(), stage[u].end());
            next[x] = *std::min_element(row_worst.begin(), row_worst.end());
        }
        value = std::move(next);
    }
    return value;
}

static RolloutResult rollout_impl(const GameModel& model, const numvec& terminal,
                                  std::size_t horizon, const numvec* initial_distribution,
                                  std::size_t initial_state, std::size_t n,
                                  std::uint64_t seed, double tie_tol) {
    const std::size_t nx = model.n_states();
    if (horizon == 0)
        throw std::invalid_argument("rollout: horizon must be >= 1");
    if (n == 0)
        throw std::invalid_argument("rollout: need at least one trajectory");
    if (terminal.size() != nx)
        throw std::invalid_argument("rollout: terminal has " +
                                    std::to_string(terminal.size()) + " entries for " +
                                    std::to_string(nx) + " states");
    if (!initial_distribution && initial_state >= nx)
        throw std::invalid_argument("rollout: initial state index " +
                                    std::to_string(initial_state) + " out of range");

    // Strategies of the horizon-T game: play-step t follows the canonical
    // equilibrium pair at the continuation value B^(T-t-1)(terminal).
    const auto iterates = bellman_iterates(model, terminal, horizon - 1);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> policy(horizon);
    for (std::size_t t = 0; t < horizon; ++t)
        policy[t] = equilibrium_set(model, iterates[horizon - t - 1], tie_tol).canonical;

    RolloutResult result;
    result.n = n;
    result.seed = seed;
    result.trajectories.reserve(n);
    std::vector<std::vector<std::size_t>> counts(horizon + 1,
                                                 std::vector<std::size_t>(nx, 0));

    numvec masses(nx);
    double total_cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        CounterRng rng(seed + static_cast<std::uint64_t>(j));
        TrajectorySample sample;
        sample.states.reserve(horizon + 1);
        sample.actions.reserve(horizon);

        std::size_t x = initial_state;
        if (initial_distribution)
            x = draw_index(*initial_distribution, rng.next_double());
        sample.states.push_back(x);
        counts[0][x] += 1;

        double cost = 0.0;
        for (std::size_t t = 0; t < horizon; ++t) {
            const auto [u, v] = policy[t][x];
            for (std::size_t y = 0; y < nx; ++y)
                masses[y] = model.rho(u, v, x, y) * model.states.pi[y];
            const std::size_t y = draw_index(masses, rng.next_double());
            cost += model.cost(u, v, x, y);
            sample.actions.emplace_back(u, v);
            x = y;
            sample.states.push_back(x);
            counts[t + 1][x] += 1;
        }
        cost += terminal[x];
        sample.realized_cost = cost;
        total_cost += cost;
        result.trajectories.push_back(std::move(sample));
    }

    result.occupation.assign(horizon + 1, numvec(nx));
    for (std::size_t t = 0; t <= horizon; ++t)
        for (std::size_t x = 0; x < nx; ++x)
            result.occupation[t][x] =
                static_cast<double>(counts[t][x]) / static_cast<double>(n);
    result.lambda_hat = total_cost / static_cast<double>(n) / static_cast<double>(horizon);
    return result;
}

RolloutResult rollout(const GameModel& model, const numvec& terminal, std::size_t horizon,
                      std::size_t initial_state, std::size_t n, std::uint64_t seed,
                      double tie_tol) {
    return rollout_impl(model, terminal, horizon, nullptr, initial_state, n, seed, tie_tol);
}

RolloutResult rollout(const GameModel& model, const numvec& terminal, std::size_t horizon,
                      const numvec& initial_distribution, std::size_t n, std::uint64_t seed,
                      double tie_tol) {
    if (initial_distribution.size() != model.n_states())
        throw std::invalid_argument("rollout: initial distribution has " +
                                    std::to_string(initial_distribution.size()) +
                                    " entries for " + std::to_string(model.n_states()) +
                                    " states");
    return rollout_impl(model, terminal, horizon, &initial_distribution, 0, n, seed, tie_tol);
}

} // namespace zsgame
