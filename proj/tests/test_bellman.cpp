#include "doctest.h"

#include "helpers.hpp"
#include "oracles.hpp"
#include "zsgame/bellman.hpp"

#include <stdexcept>

using namespace zsgame;
using testutil::load_fixture;

namespace {

numvec shifted(const numvec& s, double a) {
    numvec out = s;
    for (double& x : out) x += a;
    return out;
}

bool same_sets(const EquilibriumSet& a, const EquilibriumSet& b) {
    return a.per_state == b.per_state && a.canonical == b.canonical;
}

} // namespace

TEST_CASE("one-step value of a single-state game is the matrix game value") {
    const GameModel m = testutil::matrix_game_1422();
    // Row worst cases are (4, 3); the minimizer picks the second row.
    CHECK(apply_bellman(m, {0.0}) == numvec{3.0});
    CHECK(apply_bellman(m, {2.0}) == numvec{5.0});
    const auto eq = equilibrium_set(m, {0.0});
    CHECK(eq.per_state[0] == std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}});
    CHECK(eq.canonical[0] == std::pair<std::size_t, std::size_t>{1, 0});
}

TEST_CASE("one-step values on the two-state fixture match hand computation") {
    const GameModel m = load_fixture("tiny_a.json");
    // At s = 0 the row worst cases are (6.1, 4.06) at x0 and (2.62, 4.59) at x1.
    const numvec b0 = apply_bellman(m, {0.0, 0.0});
    CHECK(b0[0] == doctest::Approx(4.06).epsilon(1e-12));
    CHECK(b0[1] == doctest::Approx(2.62).epsilon(1e-12));
    const auto eq = equilibrium_set(m, {0.0, 0.0});
    CHECK(eq.canonical[0] == std::pair<std::size_t, std::size_t>{1, 0});
    CHECK(eq.canonical[1] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(eq.per_state[0].size() == 1);
    CHECK(eq.per_state[1].size() == 1);
}

TEST_CASE("one-step operator agrees with an independent recomputation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CAPTURE(seed);
        const GameModel m = testutil::random_model(seed);
        const numvec s = testutil::random_value(seed + 1000, m.n_states());
        const numvec mine = apply_bellman(m, s);
        const numvec ref = testutil::oracle_step(m, s);
        CHECK(testutil::max_abs_diff(mine, ref) <= 1e-12);
    }
}

TEST_CASE("one-step operator properties hold on random models") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CAPTURE(seed);
        const GameModel m = testutil::random_model(seed);
        const std::size_t nx = m.n_states();
        const numvec s1 = testutil::random_value(seed + 2000, nx);
        const numvec s2 = testutil::random_value(seed + 3000, nx);
        const numvec b1 = apply_bellman(m, s1);
        const numvec b2 = apply_bellman(m, s2);

        SUBCASE("constants pass through") {
            const double a = -10.0 + 20.0 * CounterRng(seed + 4000).next_double();
            const numvec ba = apply_bellman(m, shifted(s1, a));
            CHECK(testutil::max_abs_diff(ba, shifted(b1, a)) <= 1e-10);
        }
        SUBCASE("sup-norm non-expansive") {
            numvec diff(nx), bdiff(nx);
            for (std::size_t i = 0; i < nx; ++i) {
                diff[i] = s1[i] - s2[i];
                bdiff[i] = b1[i] - b2[i];
            }
            CHECK(testutil::max_abs(bdiff) <= testutil::max_abs(diff) + 1e-10);
        }
        SUBCASE("monotone") {
            numvec above = s1;
            CounterRng rng(seed + 5000);
            for (double& x : above) x += rng.next_double();
            const numvec ba = apply_bellman(m, above);
            for (std::size_t i = 0; i < nx; ++i) CHECK(ba[i] >= b1[i] - 1e-12);
        }
        SUBCASE("contraction at the certified rate") {
            const auto cert = minorization_search(m);
            REQUIRE(cert.has_value()); // strictly positive kernels always certify
            CHECK(quotient_distance(b1, b2) <=
                  cert->contraction_factor * quotient_distance(s1, s2) + 1e-10);
        }
    }
}

TEST_CASE("half-spread seminorm and centering") {
    CHECK(quotient_norm({}) == 0.0);
    CHECK(quotient_norm({5.0}) == 0.0);
    CHECK(quotient_norm({0.0, 4.0}) == 2.0);
    CHECK(quotient_norm({1.0, -1.0}) == 1.0);
    CHECK(quotient_norm({3.0, 5.0, 4.0}) == 1.0);
    CHECK(quotient_norm(shifted({3.0, 5.0, 4.0}, 100.0)) == 1.0);

    CHECK(project({0.0, 4.0}) == numvec{-2.0, 2.0});
    CHECK(project({7.0}) == numvec{0.0});
    const numvec p = project({3.0, 5.0, 4.0});
    CHECK(p == numvec{-1.0, 1.0, 0.0});
    CHECK(project(p) == p);

    // Centering never moves the quotient class (exact for dyadic values,
    // within rounding in general).
    CHECK(quotient_distance({3.0, 5.0, 4.0}, project({3.0, 5.0, 4.0})) == 0.0);
    const numvec awkward = {0.1, 1.0 / 3.0, -0.7, 2.9};
    CHECK(quotient_distance(awkward, project(awkward)) <= 1e-12);
}

TEST_CASE("quotient distance on hand-checked pairs") {
    CHECK(quotient_distance({101.0, 102.0}, {1.0, 2.0}) == 0.0);
    CHECK(quotient_distance({0.0, 1.0}, {1.0, 0.0}) == 1.0);
    CHECK(quotient_distance({3.0, 5.0, 4.0}, {1.0, 1.0, 1.0}) == 1.0);
    CHECK(quotient_distance({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK_THROWS_AS(quotient_distance({1.0}, {1.0, 2.0}), std::invalid_argument);

    // Symmetry and the triangle inequality on random values.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const numvec a = testutil::random_value(seed, 5);
        const numvec b = testutil::random_value(seed + 50, 5);
        const numvec c = testutil::random_value(seed + 100, 5);
        CHECK(quotient_distance(a, b) == quotient_distance(b, a));
        CHECK(quotient_distance(a, c) <=
              quotient_distance(a, b) + quotient_distance(b, c) + 1e-12);
    }
}

TEST_CASE("equilibrium selection ignores additive constants") {
    // Dyadic data and a power-of-two shift make the invariance bit-exact.
    const GameModel dyadic = testutil::matrix_game_1422();
    CHECK(same_sets(equilibrium_set(dyadic, {0.5}),
                    equilibrium_set(dyadic, {0.5 + 4.0})));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CAPTURE(seed);
        const GameModel m = testutil::random_model(seed);
        const numvec s = testutil::random_value(seed + 6000, m.n_states());
        const double a = -10.0 + 20.0 * CounterRng(seed + 7000).next_double();
        CHECK(same_sets(equilibrium_set(m, s), equilibrium_set(m, shifted(s, a))));
    }
}

TEST_CASE("tie tolerance widens the equilibrium set") {
    const GameModel m = testutil::near_tie_model();
    const numvec s_star = {1.0 / 14.0, -1.0 / 14.0};

    // At the solved relative value the second state's two row maxima differ
    // by 3/70, so a 0.05 tolerance keeps both rows while the default drops one.
    const auto tight = equilibrium_set(m, s_star);
    CHECK(tight.per_state[0] ==
          std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}});
    CHECK(tight.per_state[1] ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});

    const auto loose = equilibrium_set(m, s_star, 0.05);
    CHECK(loose.per_state[0] ==
          std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}});
    CHECK(loose.per_state[1] ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}});
    CHECK(loose.canonical[1] == std::pair<std::size_t, std::size_t>{0, 1});

    CHECK_THROWS_AS(equilibrium_set(m, s_star, -1e-9), std::invalid_argument);
}

TEST_CASE("exact ties are kept at zero tolerance on integer data") {
    // Both rows of this matrix game are (1, 2): tied minimizers, maximizer v1.
    GameModel m = testutil::matrix_game_1422();
    m.cost(0, 0, 0, 0) = 1.0;
    m.cost(0, 1, 0, 0) = 2.0;
    m.cost(1, 0, 0, 0) = 1.0;
    m.cost(1, 1, 0, 0) = 2.0;
    const auto eq = equilibrium_set(m, {0.0}, 0.0);
    CHECK(eq.per_state[0] ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}});
    CHECK(eq.canonical[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("iterate sequences chain the one-step operator") {
    const GameModel m = load_fixture("tiny_a.json");
    const auto its = bellman_iterates(m, m.terminal, 5);
    REQUIRE(its.size() == 6);
    CHECK(its[0] == m.terminal);
    for (std::size_t k = 0; k + 1 < its.size(); ++k)
        CHECK(its[k + 1] == apply_bellman(m, its[k]));
    CHECK(bellman_iterates(m, m.terminal, 0) ==
          std::vector<numvec>{m.terminal});
}

TEST_CASE("value length mismatches are rejected") {
    const GameModel m = load_fixture("tiny_a.json");
    CHECK_THROWS_AS(apply_bellman(m, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(equilibrium_set(m, {1.0, 2.0, 3.0}), std::invalid_argument);
}
