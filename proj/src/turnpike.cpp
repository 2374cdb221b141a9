#include "zsgame/turnpike.hpp"

#include "zsgame/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace zsgame {

namespace {

using pairvec = std::vector<std::pair<std::size_t, std::size_t>>;

double pair_metric(const GameModel& model, const std::pair<std::size_t, std::size_t>& a,
                   const std::pair<std::size_t, std::size_t>& b) {
    if (!model.actions.has_coords())
        return a == b ? 0.0 : 1.0;
    const numvec& ua = model.actions.u_coords[a.first];
    const numvec& ub = model.actions.u_coords[b.first];
    const numvec& va = model.actions.v_coords[a.second];
    const numvec& vb = model.actions.v_coords[b.second];
    double acc = 0.0;
    for (std::size_t d = 0; d < ua.size(); ++d) acc += (ua[d] - ub[d]) * (ua[d] - ub[d]);
    for (std::size_t d = 0; d < va.size(); ++d) acc += (va[d] - vb[d]) * (va[d] - vb[d]);
    return std::sqrt(acc);
}

double directed_hausdorff(const GameModel& model, const pairvec& from, const pairvec& to) {
    double worst = 0.0;
    for (const auto& a : from) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& b : to) nearest = std::min(nearest, pair_metric(model, a, b));
        worst = std::max(worst, nearest);
    }
    return worst;
}

void check_distribution(const numvec& p, std::size_t nx, const char* where) {
    if (p.size() != nx)
        throw std::invalid_argument(std::string(where) + ": distribution has " +
                                    std::to_string(p.size()) + " entries for " +
                                    std::to_string(nx) + " states");
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0))
            throw std::invalid_argument(std::string(where) +
                                        ": distribution entries must be >= 0");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(where) + ": distribution mass " +
                                    std::to_string(sum) + " is off 1 by more than 1e-9");
}

// One step of occupation propagation through the kernel rows picked per state.
numvec propagate(const GameModel& model, const numvec& q, const pairvec& choice) {
    const std::size_t nx = model.n_states();
    numvec out(nx, 0.0);
    for (std::size_t y = 0; y < nx; ++y) {
        double acc = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            const auto [u, v] = choice[x];
            acc += q[x] * model.rho(u, v, x, y) * model.states.pi[y];
        }
        out[y] = acc;
    }
    return out;
}

} // namespace

double tv_distance(const numvec& p, const numvec& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("tv_distance: sizes " + std::to_string(p.size()) +
                                    " and " + std::to_string(q.size()) + " differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - q[i]);
    return acc / 2.0;
}

double strategy_set_distance(const EquilibriumSet& a, const EquilibriumSet& b,
                             const GameModel& model) {
    if (a.per_state.size() != b.per_state.size())
        throw std::invalid_argument("strategy_set_distance: state counts differ");
    double worst = 0.0;
    for (std::size_t x = 0; x < a.per_state.size(); ++x) {
        if (a.per_state[x].empty() || b.per_state[x].empty())
            throw std::invalid_argument("strategy_set_distance: empty set at state " +
                                        std::to_string(x));
        const double h = std::max(directed_hausdorff(model, a.per_state[x], b.per_state[x]),
                                  directed_hausdorff(model, b.per_state[x], a.per_state[x]));
        worst = std::max(worst, h);
    }
    return worst;
}

TurnpikeProfile early_turnpike_profile(const GameModel& model, const SolveResult& solved,
                                       std::size_t horizon, double epsilon, double tie_tol) {
    if (horizon == 0)
        throw std::invalid_argument("early_turnpike_profile: horizon must be >= 1");
    const auto iterates = bellman_iterates(model, model.terminal, horizon - 1);
    const auto target = equilibrium_set(model, solved.s_star, tie_tol);

    TurnpikeProfile profile;
    profile.horizon = horizon;
    profile.threshold = epsilon;
    profile.per_step_distance.resize(horizon + 1);

    // Play-step t of the horizon-T game acts on the continuation value
    // B^(T-t-1)(terminal). The game ends at t = T with no decision, so the
    // final entry repeats the last decision step.
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto sets = equilibrium_set(model, iterates[horizon - t - 1], tie_tol);
        profile.per_step_distance[t] = strategy_set_distance(sets, target, model);
    }
    profile.per_step_distance[horizon] = profile.per_step_distance[horizon - 1];

    // Smallest m with distance <= epsilon strictly before step T - m: every
    // deviation is confined to the last m decision steps.
    std::size_t first_violation = horizon; // sentinel: none among decision steps
    for (std::size_t t = 0; t < horizon; ++t)
        if (profile.per_step_distance[t] > epsilon) {
            first_violation = t;
            break;
        }
    profile.m = horizon - first_violation;
    if (first_violation == horizon) {
        profile.m = 0;
        profile.window_lo = 0;
        profile.window_hi = static_cast<std::int64_t>(horizon);
    } else {
        profile.window_lo = 0;
        profile.window_hi = static_cast<std::int64_t>(first_violation) - 1;
    }
    return profile;
}

StationaryResult stationary_distribution(const GameModel& model, const SolveResult& solved,
                                         double tol, double tie_tol) {
    const std::size_t nx = model.n_states();
    const auto eq = equilibrium_set(model, solved.s_star, tie_tol);

    StationaryResult result;
    result.unique = true;
    for (const auto& pairs : eq.per_state)
        if (pairs.size() > 1) result.unique = false;

    numvec q(nx, 1.0 / static_cast<double>(nx));
    const std::size_t cap = 1000000;
    for (std::size_t it = 1; it <= cap; ++it) {
        numvec next = propagate(model, q, eq.canonical);
        const double moved = tv_distance(next, q);
        q = std::move(next);
        result.iterations = it;
        if (moved <= tol) {
            result.distribution = std::move(q);
            return result;
        }
    }
    throw NoConvergence("stationary_distribution: no convergence within " +
                            std::to_string(cap) + " iterations",
                        SolveResult{});
}

MiddleTurnpikeResult middle_turnpike_profile(const GameModel& model, const SolveResult& solved,
                                             std::size_t horizon, const numvec& initial,
                                             double epsilon, double tie_tol) {
    if (horizon == 0)
        throw std::invalid_argument("middle_turnpike_profile: horizon must be >= 1");
    check_distribution(initial, model.n_states(), "middle_turnpike_profile");

    MiddleTurnpikeResult result;
    auto stationary = stationary_distribution(model, solved, 1e-12, tie_tol);
    result.q_star = std::move(stationary.distribution);
    result.unique = stationary.unique;

    const auto iterates = bellman_iterates(model, model.terminal, horizon - 1);

    TurnpikeProfile& profile = result.profile;
    profile.horizon = horizon;
    profile.threshold = epsilon;
    profile.per_step_distance.resize(horizon + 1);

    numvec q = initial;
    profile.per_step_distance[0] = tv_distance(q, result.q_star);
    for (std::size_t t = 1; t <= horizon; ++t) {
        // The move into Q(t) happens at play-step t-1, whose strategies come
        // from the continuation value B^(T-t)(terminal).
        const auto sets = equilibrium_set(model, iterates[horizon - t], tie_tol);
        q = propagate(model, q, sets.canonical);
        profile.per_step_distance[t] = tv_distance(q, result.q_star);
    }

    // Smallest m whose symmetric window [m, T-m] stays under the threshold.
    bool found = false;
    for (std::size_t m = 0; 2 * m <= horizon; ++m) {
        bool ok = true;
        for (std::size_t t = m; t <= horizon - m; ++t)
            if (profile.per_step_distance[t] > epsilon) {
                ok = false;
                break;
            }
        if (ok) {
            profile.m = m;
            profile.window_lo = static_cast<std::int64_t>(m);
            profile.window_hi = static_cast<std::int64_t>(horizon - m);
            found = true;
            break;
        }
    }
    if (!found) {
        profile.m = horizon + 1; // no symmetric window at this threshold
        profile.window_lo = 1;
        profile.window_hi = 0;
    }
    return result;
}

numvec sensitivity_noise(std::size_t n_states, std::uint64_t seed, std::size_t trial) {
    CounterRng rng(seed + static_cast<std::uint64_t>(trial));
    numvec noise(n_states);
    for (std::size_t i = 0; i < n_states; ++i) noise[i] = 2.0 * rng.next_double() - 1.0;
    return noise;
}

SensitivityReport kernel_sensitivity_probe(const GameModel& model, const SolveResult& solved,
                                           const numvec& magnitudes, std::size_t trials,
                                           std::uint64_t seed, double tie_tol) {
    const std::size_t nx = model.n_states();
    const auto base = equilibrium_set(model, solved.s_star, tie_tol);

    auto kernel_row = [&](const std::pair<std::size_t, std::size_t>& pick, std::size_t x) {
        numvec row(nx);
        for (std::size_t y = 0; y < nx; ++y)
            row[y] = model.rho(pick.first, pick.second, x, y) * model.states.pi[y];
        return row;
    };
    std::vector<numvec> base_rows(nx);
    for (std::size_t x = 0; x < nx; ++x) base_rows[x] = kernel_row(base.canonical[x], x);

    std::vector<numvec> directions;
    directions.reserve(trials);
    for (std::size_t j = 0; j < trials; ++j)
        directions.push_back(sensitivity_noise(nx, seed, j));

    SensitivityReport report;
    for (double magnitude : magnitudes) {
        SensitivityEntry entry;
        entry.magnitude = magnitude;
        for (std::size_t j = 0; j < trials; ++j) {
            numvec perturbed(nx);
            double noise_norm = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                const double eta = magnitude * directions[j][i];
                perturbed[i] = solved.s_star[i] + eta;
                noise_norm = std::max(noise_norm, std::fabs(eta));
            }
            const auto moved = equilibrium_set(model, perturbed, tie_tol);
            double trial_distance = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                const double d = tv_distance(kernel_row(moved.canonical[x], x), base_rows[x]);
                trial_distance = std::max(trial_distance, d);
            }
            entry.max_distance = std::max(entry.max_distance, trial_distance);
            if (noise_norm > 0.0)
                entry.ratio = std::max(entry.ratio, trial_distance / noise_norm);
        }
        report.k_hat = std::max(report.k_hat, entry.ratio);
        report.entries.push_back(entry);
    }
    return report;
}

void write_profile_csv(const TurnpikeProfile& profile, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open file for writing");
    out << "t,distance,in_window\n";
    char buf[64];
    for (std::size_t t = 0; t < profile.per_step_distance.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g", profile.per_step_distance[t]);
        out << t << ',' << buf << ',' << (profile.in_window(t) ? 1 : 0) << '\n';
    }
    if (!out)
        throw std::runtime_error(path + ": write failed");
}

} // namespace zsgame
