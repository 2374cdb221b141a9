#include "zsgame/bellman.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace zsgame {

namespace {

void check_value(const GameModel& model, const numvec& s, const char* where) {
    if (s.size() != model.n_states())
        throw std::invalid_argument(std::string(where) + ": value function has " +
                                    std::to_string(s.size()) + " entries for " +
                                    std::to_string(model.n_states()) + " states");
}

// Stage payoff of (u, v) at x given continuation s, accumulated left to right
// over the successor states. This is the one scan order the whole library
// shares; keeping it in one place keeps runs bit-reproducible.
double stage_value(const GameModel& model, const numvec& s, std::size_t u,
                   std::size_t v, std::size_t x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < model.n_states(); ++y)
        acc += (model.cost(u, v, x, y) + s[y]) * model.rho(u, v, x, y) * model.states.pi[y];
    return acc;
}

} // namespace

numvec apply_bellman(const GameModel& model, const numvec& s) {
    check_value(model, s, "apply_bellman");
    const std::size_t nx = model.n_states();
    numvec out(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        double best_u = std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < model.n_u(); ++u) {
            double worst_v = -std::numeric_limits<double>::infinity();
            for (std::size_t v = 0; v < model.n_v(); ++v)
                worst_v = std::max(worst_v, stage_value(model, s, u, v, x));
            best_u = std::min(best_u, worst_v);
        }
        out[x] = best_u;
    }
    return out;
}

double quotient_norm(const numvec& s) {
    if (s.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return (*hi - *lo) / 2.0;
}

numvec project(const numvec& s) {
    if (s.empty()) return s;
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    const double center = (*hi + *lo) / 2.0;
    numvec out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] - center;
    return out;
}

double quotient_distance(const numvec& a, const numvec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("quotient_distance: sizes " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()) + " differ");
    if (a.empty()) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return (hi - lo) / 2.0;
}

EquilibriumSet equilibrium_set(const GameModel& model, const numvec& s, double tie_tol) {
    check_value(model, s, "equilibrium_set");
    if (tie_tol < 0.0)
        throw std::invalid_argument("equilibrium_set: tie tolerance must be >= 0");

    const std::size_t nx = model.n_states();
    const std::size_t nu = model.n_u();
    const std::size_t nv = model.n_v();

    EquilibriumSet eq;
    eq.tie_tolerance = tie_tol;
    eq.per_state.resize(nx);
    eq.canonical.resize(nx);

    numvec row_max(nu);
    std::vector<numvec> stage(nu, numvec(nv));
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u < nu; ++u) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t v = 0; v < nv; ++v) {
                stage[u][v] = stage_value(model, s, u, v, x);
                worst = std::max(worst, stage[u][v]);
            }
            row_max[u] = worst;
        }
        const double least = *std::min_element(row_max.begin(), row_max.end());

        // Near-optimal u rows, each paired with its near-best v replies.
        // Push order is (u ascending, v ascending), so the first pair found
        // is the canonical representative.
        auto& pairs = eq.per_state[x];
        for (std::size_t u = 0; u < nu; ++u) {
            if (row_max[u] > least + tie_tol) continue;
            for (std::size_t v = 0; v < nv; ++v)
                if (stage[u][v] >= row_max[u] - tie_tol) pairs.emplace_back(u, v);
        }
        eq.canonical[x] = pairs.front();
    }
    return eq;
}

std::vector<numvec> bellman_iterates(const GameModel& model, const numvec& start,
                                     std::size_t count) {
    std::vector<numvec> iterates;
    iterates.reserve(count + 1);
    iterates.push_back(start);
    for (std::size_t k = 0; k < count; ++k)
        iterates.push_back(apply_bellman(model, iterates.back()));
    return iterates;
}

} // namespace zsgame
