#pragma once

#include "zsgame/bellman.hpp"
#include "zsgame/model.hpp"
#include "zsgame/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace zsgame {

/** Total variation distance (1/2) * sum |p - q| between state distributions. */
double tv_distance(const numvec& p, const numvec& q);

/**
 * Worst-state Hausdorff distance between two per-state strategy sets.
 *
 * Ground metric on action pairs: discrete (0/1) by default, Euclidean on the
 * concatenated (u, v) coordinates when the model carries them. Under the
 * discrete metric the distance at a state is 0 iff the sets are equal and 1
 * otherwise.
 */
double strategy_set_distance(const EquilibriumSet& a, const EquilibriumSet& b,
                             const GameModel& model);

/**
 * Per-step turnpike profile of a horizon-T game.
 *
 * per_step_distance has T+1 entries. window_lo..window_hi is the verified
 * window (empty iff window_lo > window_hi) and m the turnpike constant
 * extracted by the producing operation; in_window(t) mirrors the CSV column.
 */
struct TurnpikeProfile {
    std::size_t horizon = 0;
    numvec per_step_distance;
    double threshold = 0.0;
    std::int64_t window_lo = 1;
    std::int64_t window_hi = 0;
    std::size_t m = 0;

    bool has_window() const { return window_lo <= window_hi; }
    bool in_window(std::size_t t) const {
        return window_lo <= static_cast<std::int64_t>(t) &&
               static_cast<std::int64_t>(t) <= window_hi;
    }
};

/**
 * Strategy turnpike: how long the finite game plays the long-run equilibrium.
 *
 * The set in force at play-step t of a T-step game comes from the
 * continuation value B^(T-t-1)(terminal); distance[t] compares it against
 * the set at s_star. m is the smallest value such that distance[t] <=
 * epsilon for every t < T - m, so deviations only ever sit in the last m
 * steps. The entry at index T repeats the final decision step (the game
 * ends there; no decision is taken).
 */
TurnpikeProfile early_turnpike_profile(const GameModel& model, const SolveResult& solved,
                                       std::size_t horizon, double epsilon,
                                       double tie_tol = 1e-9);

/**
 * Stationary distribution of the chain induced by canonical optimal play at
 * s_star: P(x, y) = rho(u*(x), v*(x), x, y) * pi[y]. Power iteration from
 * uniform until the step moves less than tol in total variation. unique is
 * false when some state's equilibrium set had more than one pair (the
 * canonical pair is still used).
 */
struct StationaryResult {
    numvec distribution;
    std::size_t iterations = 0;
    bool unique = true;
};

StationaryResult stationary_distribution(const GameModel& model, const SolveResult& solved,
                                         double tol = 1e-12, double tie_tol = 1e-9);

/**
 * Distribution turnpike: occupation of the finite game hugs the stationary
 * distribution through the middle of the horizon.
 *
 * Q(0) = initial; Q(t) propagates Q(t-1) through the kernel picked by the
 * canonical pair of the step's equilibrium set. distance[t] = tv(Q(t), q_star)
 * and m is the smallest value with distance <= epsilon on all of [m, T-m];
 * the window is empty when no such m exists.
 */
struct MiddleTurnpikeResult {
    TurnpikeProfile profile;
    numvec q_star;
    bool unique = true;
};

MiddleTurnpikeResult middle_turnpike_profile(const GameModel& model, const SolveResult& solved,
                                             std::size_t horizon, const numvec& initial,
                                             double epsilon, double tie_tol = 1e-9);

/**
 * How far the equilibrium kernel moves when s_star is perturbed.
 *
 * For each trial a base direction with entries uniform in [-1, 1] is drawn
 * from stream seed + trial; each magnitude scales that direction. max_distance
 * is the worst total variation distance between the canonical equilibrium
 * kernel rows at the perturbed and unperturbed values; ratio divides by the
 * sup norm of the applied noise (0 at magnitude 0). k_hat is the largest
 * ratio seen. Strict equilibrium gaps make small magnitudes score exactly 0.
 */
struct SensitivityEntry {
    double magnitude = 0.0;
    double max_distance = 0.0;
    double ratio = 0.0;
};

struct SensitivityReport {
    std::vector<SensitivityEntry> entries;
    double k_hat = 0.0;
};

SensitivityReport kernel_sensitivity_probe(const GameModel& model, const SolveResult& solved,
                                           const numvec& magnitudes, std::size_t trials,
                                           std::uint64_t seed, double tie_tol = 1e-9);

/** The probe's base direction for one trial, exposed so checks can replay it. */
numvec sensitivity_noise(std::size_t n_states, std::uint64_t seed, std::size_t trial);

/** Writes "t,distance,in_window" rows at full decimal precision. */
void write_profile_csv(const TurnpikeProfile& profile, const std::string& path);

} // namespace zsgame
