#pragma once

#include "zsgame/model.hpp"
#include "zsgame/rng.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline zsgame::GameModel load_fixture(const std::string& name) {
    return zsgame::load_model(fixture_path(name));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string temp_path(const std::string& name) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("zsgame_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / (std::to_string(counter++) + "_" + name)).string();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

/** Runs the command line tool; returns its exit code. */
inline int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/** Runs the tool with stdout captured to a file; returns its exit code. */
inline int run_cli_capture(const std::string& args, const std::string& stdout_path) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " > " + stdout_path +
                            " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/** Valid random model: strictly positive kernel, |g| <= 3, unit-free scale. */
inline zsgame::GameModel random_model(std::uint64_t seed, std::size_t min_states = 2,
                                      std::size_t max_states = 10,
                                      std::size_t min_actions = 2,
                                      std::size_t max_actions = 4) {
    using namespace zsgame;
    CounterRng rng(seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng.next_double() *
                                             static_cast<double>(hi - lo + 1));
    };

    GameModel m;
    const std::size_t nx = pick(min_states, max_states);
    const std::size_t nu = pick(min_actions, max_actions);
    const std::size_t nv = pick(min_actions, max_actions);
    for (std::size_t i = 0; i < nx; ++i) {
        m.states.ids.push_back("x" + std::to_string(i));
        m.states.pi.push_back(uniform(0.5, 1.5));
    }
    for (std::size_t i = 0; i < nu; ++i) m.actions.u_labels.push_back("u" + std::to_string(i));
    for (std::size_t i = 0; i < nv; ++i) m.actions.v_labels.push_back("v" + std::to_string(i));

    m.rho = Array4(nu, nv, nx, nx);
    m.cost = Array4(nu, nv, nx, nx);
    m.cost_bound = 3.0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t x = 0; x < nx; ++x) {
                double mass = 0.0;
                for (std::size_t y = 0; y < nx; ++y) {
                    m.rho(u, v, x, y) = uniform(0.05, 1.0);
                    mass += m.rho(u, v, x, y) * m.states.pi[y];
                }
                for (std::size_t y = 0; y < nx; ++y) m.rho(u, v, x, y) /= mass;
                for (std::size_t y = 0; y < nx; ++y)
                    m.cost(u, v, x, y) = uniform(-3.0, 3.0);
            }
    for (std::size_t i = 0; i < nx; ++i) m.terminal.push_back(uniform(-5.0, 5.0));
    return m;
}

inline zsgame::numvec random_value(std::uint64_t seed, std::size_t n, double lo = -5.0,
                                   double hi = 5.0) {
    zsgame::CounterRng rng(seed);
    zsgame::numvec out(n);
    for (auto& x : out) x = lo + (hi - lo) * rng.next_double();
    return out;
}

/** One state, two actions each, unit kernel: the matrix game [[1,4],[3,2]]. */
inline zsgame::GameModel matrix_game_1422() {
    using namespace zsgame;
    GameModel m;
    m.states.ids = {"x0"};
    m.states.pi = {1.0};
    m.actions.u_labels = {"u0", "u1"};
    m.actions.v_labels = {"v0", "v1"};
    m.rho = Array4(2, 2, 1, 1);
    m.cost = Array4(2, 2, 1, 1);
    m.rho(0, 0, 0, 0) = m.rho(0, 1, 0, 0) = m.rho(1, 0, 0, 0) = m.rho(1, 1, 0, 0) = 1.0;
    m.cost(0, 0, 0, 0) = 1.0;
    m.cost(0, 1, 0, 0) = 4.0;
    m.cost(1, 0, 0, 0) = 3.0;
    m.cost(1, 1, 0, 0) = 2.0;
    m.cost_bound = 4.0;
    m.terminal = {0.0};
    return m;
}

/**
 * Three states, one action each, no certificate (every state has a zero
 * transition floor), yet mixing: the chain hops to the two other states with
 * probability 1/2 each. lambda = 2 and s_star = (-2/3, 0, 2/3) by balance:
 * s_x + lambda = g_x + (sum of the other two s) / 2 with sum s = 0.
 */
inline zsgame::GameModel mixing3_model() {
    using namespace zsgame;
    GameModel m;
    m.states.ids = {"x0", "x1", "x2"};
    m.states.pi = {1.0, 1.0, 1.0};
    m.actions.u_labels = {"u0"};
    m.actions.v_labels = {"v0"};
    m.rho = Array4(1, 1, 3, 3);
    m.cost = Array4(1, 1, 3, 3);
    const double g_of[3] = {1.0, 2.0, 3.0};
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
            m.rho(0, 0, x, y) = (x == y) ? 0.0 : 0.5;
            m.cost(0, 0, x, y) = g_of[x];
        }
    m.cost_bound = 3.0;
    m.terminal = {0.0, 0.0, 0.0};
    return m;
}

/**
 * Two states with a near-tie for the minimizer at x1. u0 rows are all
 * (0.5, 0.5), u1 rows all (0.8, 0.2), so flips move the picked kernel by
 * exactly 0.3 in total variation. At the solved relative value the x1 row
 * maxima differ by 3/70, and a perturbation eta flips x1 iff
 * 0.3 * (eta1 - eta0) exceeds that gap, i.e. eta1 - eta0 > 1/7.
 */
inline zsgame::GameModel near_tie_model() {
    using namespace zsgame;
    GameModel m;
    m.states.ids = {"x0", "x1"};
    m.states.pi = {1.0, 1.0};
    m.actions.u_labels = {"u0", "u1"};
    m.actions.v_labels = {"v0", "v1"};
    m.rho = Array4(2, 2, 2, 2);
    m.cost = Array4(2, 2, 2, 2);
    const double stage[2][2][2] = {{{1.0, 1.0}, {2.0, 1.5}},
                                   {{0.9, 1.0}, {1.6, 1.5}}};
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t v = 0; v < 2; ++v)
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) {
                    m.rho(u, v, x, y) = (u == 0) ? 0.5 : (y == 0 ? 0.8 : 0.2);
                    m.cost(u, v, x, y) = stage[u][v][x];
                }
    m.cost_bound = 2.0;
    m.terminal = {0.0, 0.0};
    return m;
}

} // namespace testutil
