#include "zsgame/solver.hpp"

#include <cmath>
#include <string>

namespace zsgame {

namespace {

numvec shifted(const numvec& s, double a) {
    numvec out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + a;
    return out;
}

double sup_norm(const numvec& s) {
    double m = 0.0;
    for (double x : s) m = std::max(m, std::fabs(x));
    return m;
}

double sup_norm_diff(const numvec& a, const numvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

} // namespace

SolveResult solve_from(const GameModel& model, const numvec& initial, double tol,
                       std::size_t max_iter) {
    if (!(tol > 0.0))
        throw std::invalid_argument("solve: tolerance must be > 0");

    const auto cert = minorization_search(model);
    // A-posteriori Banach rule: once successive projected iterates are within
    // tol * (1 - beta) / beta, the fixed point is within tol. Without a
    // certificate fall back to successive distance <= tol and mark the result.
    double stop = tol;
    if (cert) {
        const double beta = cert->contraction_factor;
        stop = tol * (1.0 - beta) / std::max(beta, 1e-300);
    }

    SolveResult result;
    result.certified = cert.has_value();

    numvec s = project(initial);
    bool converged = false;
    std::size_t iter = 0;
    while (iter < max_iter) {
        ++iter;
        numvec next = project(apply_bellman(model, s));
        const double d = quotient_distance(next, s);
        result.rate_history.push_back(d);
        s = std::move(next);
        if (d <= stop) {
            converged = true;
            break;
        }
    }
    result.iterations = iter;
    result.s_star = s;

    const numvec bs = apply_bellman(model, s);
    double sum = 0.0;
    for (std::size_t x = 0; x < s.size(); ++x) sum += bs[x] - s[x];
    result.lambda = sum / static_cast<double>(s.size());
    result.final_residual = quotient_distance(bs, shifted(s, result.lambda));

    if (!converged && result.final_residual > tol)
        throw NoConvergence("solve: no convergence after " + std::to_string(iter) +
                                " iterations (residual " +
                                std::to_string(result.final_residual) + ", tolerance " +
                                std::to_string(tol) + ")",
                            result);
    return result;
}

SolveResult solve(const GameModel& model, double tol, std::size_t max_iter) {
    return solve_from(model, model.terminal, tol, max_iter);
}

AverageCostReport average_cost_run(const GameModel& model, const SolveResult& solved,
                                   const numvec& s, std::size_t horizon) {
    AverageCostReport report;
    report.iterates = bellman_iterates(model, s, horizon);
    report.bound = sup_norm(solved.s_star) + sup_norm_diff(s, solved.s_star);
    report.gaps.resize(horizon + 1);
    for (std::size_t t = 0; t <= horizon; ++t) {
        const double target = static_cast<double>(t) * solved.lambda;
        double gap = 0.0;
        for (double w : report.iterates[t]) gap = std::max(gap, std::fabs(w - target));
        report.gaps[t] = gap;
        if (gap > report.bound + 1e-8) report.flagged.push_back(t);
    }
    return report;
}

ConvergenceReport convergence_report(const GameModel& model,
                                     const std::optional<MinorizationCertificate>& cert,
                                     const SolveResult& solved, const numvec& s,
                                     std::size_t horizon) {
    if (!cert)
        throw MissingCertificate("convergence_report: no minorization certificate; "
                                 "the geometric envelope is undefined without one");

    ConvergenceReport report;
    report.distances.resize(horizon + 1);
    report.envelope.resize(horizon + 1);
    const double beta = cert->contraction_factor;

    numvec w = s;
    double env = 0.0;
    for (std::size_t t = 0; t <= horizon; ++t) {
        if (t > 0) w = apply_bellman(model, w);
        report.distances[t] = quotient_distance(w, solved.s_star);
        env = (t == 0) ? report.distances[0] : env * beta;
        report.envelope[t] = env;
        if (report.distances[t] > env + 1e-8) report.flagged.push_back(t);
    }
    return report;
}

} // namespace zsgame
