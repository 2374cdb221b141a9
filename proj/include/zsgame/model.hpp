#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zsgame {

using numvec = std::vector<double>;

/**
 * Dense rank-4 array indexed [u][v][x][y], row-major.
 *
 * Used for the transition density and the stage cost of a game. Extents are
 * fixed at construction; out-of-range access is the caller's bug and is not
 * checked in release builds.
 */
class Array4 {
public:
    Array4() = default;
    Array4(std::size_t nu, std::size_t nv, std::size_t nx, std::size_t ny)
        : nu_(nu), nv_(nv), nx_(nx), ny_(ny), data_(nu * nv * nx * ny, 0.0) {}

    double operator()(std::size_t u, std::size_t v, std::size_t x, std::size_t y) const {
        return data_[((u * nv_ + v) * nx_ + x) * ny_ + y];
    }
    double& operator()(std::size_t u, std::size_t v, std::size_t x, std::size_t y) {
        return data_[((u * nv_ + v) * nx_ + x) * ny_ + y];
    }

    std::size_t nu() const { return nu_; }
    std::size_t nv() const { return nv_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Array4&) const = default;

private:
    std::size_t nu_ = 0, nv_ = 0, nx_ = 0, ny_ = 0;
    std::vector<double> data_;
};

/** Finite state space with strictly positive per-state weights. */
struct StateSpace {
    std::vector<std::string> ids;
    numvec pi;

    std::size_t size() const { return ids.size(); }

    bool operator==(const StateSpace&) const = default;
};

/**
 * Finite action grids for the minimizer (u) and maximizer (v).
 *
 * Optional coordinate vectors, one per action and all of equal dimension,
 * switch strategy-set distances from the discrete metric to Euclidean
 * distance on concatenated (u, v) coordinates.
 */
struct ActionSets {
    std::vector<std::string> u_labels;
    std::vector<std::string> v_labels;
    std::vector<numvec> u_coords;
    std::vector<numvec> v_coords;

    bool has_coords() const { return !u_coords.empty() && !v_coords.empty(); }

    bool operator==(const ActionSets&) const = default;
};

/**
 * A finite two-person zero-sum Markov game.
 *
 * rho holds the transition density against the state weights: the mass of
 * moving to y under (u, v) from x is rho(u,v,x,y) * pi[y], and each
 * (u, v, x) row has total mass 1 within 1e-9. cost holds the stage cost
 * g(u,v,x,y), bounded by cost_bound. terminal is the terminal cost.
 * The minimizer controls u, the maximizer controls v, and the one-step
 * operator resolves in the minimizer's worst case (min over u of the max
 * over v).
 *
 * Models are immutable after loading; every operation on them is pure.
 */
struct GameModel {
    StateSpace states;
    ActionSets actions;
    Array4 rho;
    Array4 cost;
    double cost_bound = 0.0;
    numvec terminal;

    std::size_t n_states() const { return states.size(); }
    std::size_t n_u() const { return actions.u_labels.size(); }
    std::size_t n_v() const { return actions.v_labels.size(); }

    bool operator==(const GameModel&) const = default;
};

/** Validation outcome: empty violations means the model is well formed. */
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/**
 * Checks every model invariant and reports all violations as data, each
 * message carrying the index path of the offending entry. Never throws on
 * bad values; reserves exceptions for I/O.
 */
ValidationReport validate(const GameModel& model);

/**
 * A uniform minorization witness: the transition density is at least delta
 * on the set set_a for every (u, v, x). mass_a is the pi-mass of set_a and
 * contraction_factor = 1 - delta * mass_a is the per-step contraction rate
 * of the one-step operator on the quotient seminorm.
 */
struct MinorizationCertificate {
    double delta = 0.0;
    std::vector<std::size_t> set_a;
    double mass_a = 0.0;
    double contraction_factor = 1.0;
};

/**
 * Searches for the best threshold-induced minorization certificate.
 *
 * floor(y) = min over (u,v,x) of rho(u,v,x,y). Candidate thresholds are the
 * distinct positive floors; A(delta) = {y : floor(y) >= delta}. Returns the
 * candidate maximizing delta * pi(A(delta)), preferring larger sets on ties,
 * or nothing when every floor is zero. The returned delta/set pair is optimal
 * among all (threshold, set) pairs, not just the scanned ones: enlarging A
 * beyond A(delta) forces a smaller delta than any scanned candidate allows.
 */
std::optional<MinorizationCertificate> minorization_search(const GameModel& model);

/** Exhaustive re-check of a certificate against the kernel, for tests. */
bool check_certificate(const GameModel& model, const MinorizationCertificate& cert);

/** Malformed model file: bad JSON or a missing/mistyped field. Names the field. */
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Array extents inconsistent with the declared states/actions. Names the array. */
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Reads a model from a JSON file. Throws ParseError or ShapeError. */
GameModel load_model(const std::string& path);

/** Parses a model from JSON text; origin labels the source in diagnostics. */
GameModel parse_model(const std::string& text, const std::string& origin);

/** Serializes a model to JSON text; load_model(save_model(m)) is bit-exact. */
std::string model_to_text(const GameModel& model);

/** Writes a model to a JSON file. Throws std::runtime_error on I/O failure. */
void save_model(const GameModel& model, const std::string& path);

} // namespace zsgame
