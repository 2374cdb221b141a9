#pragma once

#include "zsgame/bellman.hpp"
#include "zsgame/model.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace zsgame {

/**
 * Average-cost solution of a game.
 *
 * lambda is the per-step value of the long run game and s_star the centered
 * relative value: B(s_star) = lambda + s_star up to final_residual, with
 * final_residual <= the solve tolerance. rate_history holds the successive
 * projected-iterate quotient distances, one per iteration. certified records
 * whether a minorization certificate backed the stopping rule; without one
 * the fallback rule (successive distance <= tol) is used and the result is
 * marked uncertified.
 */
struct SolveResult {
    double lambda = 0.0;
    numvec s_star;
    std::size_t iterations = 0;
    double final_residual = 0.0;
    numvec rate_history;
    bool certified = false;
};

/** Iteration budget exhausted with residual above tolerance. Carries the best iterate. */
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, SolveResult best_so_far)
        : std::runtime_error(what), best(std::move(best_so_far)) {}
    SolveResult best;
};

/** An operation that needs a minorization certificate was run without one. */
struct MissingCertificate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Fixed-point iteration for (lambda, s_star).
 *
 * Starts from the projected terminal cost (or the given initial value) and
 * iterates s <- project(B(s)). With a certificate of contraction factor beta,
 * stops once the successive quotient distance is <= tol * (1 - beta) /
 * max(beta, 1e-300), which bounds the distance to the fixed point by tol.
 * lambda is the mean of B(s_star) - s_star over states. Deterministic given
 * the model. Throws NoConvergence when max_iter is hit with residual above
 * tol.
 */
SolveResult solve(const GameModel& model, double tol = 1e-10,
                  std::size_t max_iter = 100000);

/** solve with an explicit initial value, for uniqueness probes. */
SolveResult solve_from(const GameModel& model, const numvec& initial, double tol,
                       std::size_t max_iter);

/**
 * Finite-horizon check of the constant-offset law.
 *
 * Runs B^t s for t = 0..horizon and reports gap(t) = max-norm of B^t s - t*lambda
 * against the constant bound ||s_star|| + ||s - s_star|| (sup norms). flagged
 * lists any t with gap(t) > bound + 1e-8; on a valid solve there are none.
 */
struct AverageCostReport {
    std::vector<numvec> iterates;
    numvec gaps;
    double bound = 0.0;
    std::vector<std::size_t> flagged;
};

AverageCostReport average_cost_run(const GameModel& model, const SolveResult& solved,
                                   const numvec& s, std::size_t horizon);

/**
 * Geometric convergence audit toward s_star.
 *
 * d_t = quotient distance of B^t s from s_star, against the envelope
 * factor^t * d_0 from the certificate. flagged lists t with
 * d_t > envelope(t) + 1e-8. Throws MissingCertificate without a certificate.
 */
struct ConvergenceReport {
    numvec distances;
    numvec envelope;
    std::vector<std::size_t> flagged;
};

ConvergenceReport convergence_report(const GameModel& model,
                                     const std::optional<MinorizationCertificate>& cert,
                                     const SolveResult& solved, const numvec& s,
                                     std::size_t horizon);

} // namespace zsgame
