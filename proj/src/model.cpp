#include "zsgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>

namespace zsgame {

namespace {

constexpr double kRowMassTol = 1e-9;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string path4(const char* name, std::size_t u, std::size_t v, std::size_t x) {
    return std::string(name) + "[" + std::to_string(u) + "][" + std::to_string(v) +
           "][" + std::to_string(x) + "]";
}

std::string path4(const char* name, std::size_t u, std::size_t v, std::size_t x,
                  std::size_t y) {
    return path4(name, u, v, x) + "[" + std::to_string(y) + "]";
}

void check_labels(const std::vector<std::string>& labels, const char* what,
                  std::vector<std::string>& out) {
    if (labels.empty()) out.push_back(std::string(what) + " must not be empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!seen.insert(labels[i]).second)
            out.push_back(std::string(what) + "[" + std::to_string(i) +
                          "] duplicates label \"" + labels[i] + "\"");
}

void check_coords(const std::vector<numvec>& coords, std::size_t n_actions,
                  const char* what, std::vector<std::string>& out) {
    if (coords.empty()) return;
    if (coords.size() != n_actions) {
        out.push_back(std::string(what) + " has " + std::to_string(coords.size()) +
                      " entries for " + std::to_string(n_actions) + " actions");
        return;
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].size() != coords[0].size())
            out.push_back(std::string(what) + "[" + std::to_string(i) +
                          "] has dimension " + std::to_string(coords[i].size()) +
                          ", expected " + std::to_string(coords[0].size()));
        for (std::size_t d = 0; d < coords[i].size(); ++d)
            if (!std::isfinite(coords[i][d]))
                out.push_back(std::string(what) + "[" + std::to_string(i) + "][" +
                              std::to_string(d) + "] is not finite");
    }
}

} // namespace

ValidationReport validate(const GameModel& model) {
    ValidationReport report;
    auto& out = report.violations;

    const std::size_t nx = model.n_states();
    const std::size_t nu = model.n_u();
    const std::size_t nv = model.n_v();

    if (nx == 0) out.push_back("states.ids must contain at least one state");
    check_labels(model.states.ids, "states.ids", out);
    check_labels(model.actions.u_labels, "actions.u", out);
    check_labels(model.actions.v_labels, "actions.v", out);

    if (model.states.pi.size() != nx)
        out.push_back("states.pi has " + std::to_string(model.states.pi.size()) +
                      " entries for " + std::to_string(nx) + " states");
    for (std::size_t i = 0; i < model.states.pi.size(); ++i)
        if (!(model.states.pi[i] > 0.0) || !std::isfinite(model.states.pi[i]))
            out.push_back("states.pi[" + std::to_string(i) + "] must be finite and > 0 (got " +
                          num(model.states.pi[i]) + ")");

    if (model.actions.u_coords.empty() != model.actions.v_coords.empty())
        out.push_back("actions.u_coords and actions.v_coords must be given together");
    check_coords(model.actions.u_coords, nu, "actions.u_coords", out);
    check_coords(model.actions.v_coords, nv, "actions.v_coords", out);

    auto shape_ok = [&](const Array4& a, const char* name) {
        if (a.nu() != nu || a.nv() != nv || a.nx() != nx || a.ny() != nx) {
            out.push_back(std::string(name) + " has extents [" + std::to_string(a.nu()) +
                          "][" + std::to_string(a.nv()) + "][" + std::to_string(a.nx()) +
                          "][" + std::to_string(a.ny()) + "], expected [" +
                          std::to_string(nu) + "][" + std::to_string(nv) + "][" +
                          std::to_string(nx) + "][" + std::to_string(nx) + "]");
            return false;
        }
        return true;
    };

    const bool rho_shaped = shape_ok(model.rho, "rho");
    const bool g_shaped = shape_ok(model.cost, "g");
    const bool pi_ok = model.states.pi.size() == nx;

    if (rho_shaped) {
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t v = 0; v < nv; ++v)
                for (std::size_t x = 0; x < nx; ++x) {
                    double mass = 0.0;
                    bool row_clean = true;
                    for (std::size_t y = 0; y < nx; ++y) {
                        const double r = model.rho(u, v, x, y);
                        if (!std::isfinite(r)) {
                            out.push_back(path4("rho", u, v, x, y) + " is not finite");
                            row_clean = false;
                        } else if (r < 0.0) {
                            out.push_back(path4("rho", u, v, x, y) + " is negative (" +
                                          num(r) + ")");
                            row_clean = false;
                        }
                        if (pi_ok) mass += r * model.states.pi[y];
                    }
                    if (pi_ok && row_clean && std::fabs(mass - 1.0) > kRowMassTol)
                        out.push_back(path4("rho", u, v, x) + " row mass is " + num(mass) +
                                      ", off 1 by more than " + num(kRowMassTol));
                }
    }

    if (!std::isfinite(model.cost_bound) || model.cost_bound < 0.0)
        out.push_back("G must be finite and >= 0 (got " + num(model.cost_bound) + ")");
    else if (g_shaped) {
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t v = 0; v < nv; ++v)
                for (std::size_t x = 0; x < nx; ++x)
                    for (std::size_t y = 0; y < nx; ++y) {
                        const double c = model.cost(u, v, x, y);
                        if (!std::isfinite(c))
                            out.push_back(path4("g", u, v, x, y) + " is not finite");
                        else if (std::fabs(c) > model.cost_bound)
                            out.push_back(path4("g", u, v, x, y) + " has |g| = " +
                                          num(std::fabs(c)) + " above the bound G = " +
                                          num(model.cost_bound));
                    }
    }

    if (model.terminal.size() != nx)
        out.push_back("terminal has " + std::to_string(model.terminal.size()) +
                      " entries for " + std::to_string(nx) + " states");
    for (std::size_t i = 0; i < model.terminal.size(); ++i)
        if (!std::isfinite(model.terminal[i]))
            out.push_back("terminal[" + std::to_string(i) + "] is not finite");

    return report;
}

std::optional<MinorizationCertificate> minorization_search(const GameModel& model) {
    const std::size_t nx = model.n_states();
    const std::size_t nu = model.n_u();
    const std::size_t nv = model.n_v();

    // floor(y): the uniform lower bound of the density into y over all (u, v, x).
    numvec floors(nx, std::numeric_limits<double>::infinity());
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t x = 0; x < nx; ++x)
                for (std::size_t y = 0; y < nx; ++y)
                    floors[y] = std::min(floors[y], model.rho(u, v, x, y));

    numvec thresholds;
    for (double f : floors)
        if (f > 0.0) thresholds.push_back(f);
    if (thresholds.empty()) return std::nullopt;
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    // Every candidate set is A(delta) = {y : floor(y) >= delta} for a scanned
    // delta; any other set with a usable bound delta' is contained in A(delta')
    // with no better score, so the scan is exhaustive over all certificates.
    bool have = false;
    MinorizationCertificate best;
    for (double delta : thresholds) {
        std::vector<std::size_t> set_a;
        double mass = 0.0;
        for (std::size_t y = 0; y < nx; ++y)
            if (floors[y] >= delta) {
                set_a.push_back(y);
                mass += model.states.pi[y];
            }
        const double score = delta * mass;
        const double best_score = best.delta * best.mass_a;
        if (!have || score > best_score ||
            (score == best_score && set_a.size() > best.set_a.size())) {
            best.delta = delta;
            best.set_a = std::move(set_a);
            best.mass_a = mass;
            have = true;
        }
    }
    best.contraction_factor = std::max(0.0, 1.0 - best.delta * best.mass_a);
    return best;
}

bool check_certificate(const GameModel& model, const MinorizationCertificate& cert) {
    if (!(cert.delta > 0.0) || cert.set_a.empty()) return false;
    double mass = 0.0;
    for (std::size_t y : cert.set_a) {
        if (y >= model.n_states()) return false;
        mass += model.states.pi[y];
        for (std::size_t u = 0; u < model.n_u(); ++u)
            for (std::size_t v = 0; v < model.n_v(); ++v)
                for (std::size_t x = 0; x < model.n_states(); ++x)
                    if (model.rho(u, v, x, y) < cert.delta) return false;
    }
    if (std::fabs(mass - cert.mass_a) > 1e-12) return false;
    const double factor = std::max(0.0, 1.0 - cert.delta * cert.mass_a);
    if (std::fabs(factor - cert.contraction_factor) > 1e-12) return false;
    return cert.contraction_factor >= 0.0 && cert.contraction_factor < 1.0;
}

} // namespace zsgame
