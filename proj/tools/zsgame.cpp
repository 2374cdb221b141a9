#include "zsgame/bellman.hpp"
#include "zsgame/model.hpp"
#include "zsgame/sim.hpp"
#include "zsgame/solver.hpp"
#include "zsgame/turnpike.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;
using namespace zsgame;

constexpr int kOk = 0;
constexpr int kInvalidModel = 2;
constexpr int kNoConvergence = 3;
constexpr int kIoError = 4;

struct Options {
    std::string model;
    std::string out;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    std::size_t horizon = 0;
    double epsilon = 0.01;
    double tie_tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t n = 1000;
    std::string initial = "uniform";
};

json base_report(const std::string& command, const json& inputs) {
    json report;
    report["command"] = command;
    report["inputs"] = inputs;
    report["schema_version"] = 1;
    report["certificate"] = nullptr;
    report["warnings"] = json::array();
    report["results"] = json::object();
    return report;
}

json certificate_json(const std::optional<MinorizationCertificate>& cert) {
    if (!cert) return nullptr;
    json c;
    c["delta"] = cert->delta;
    c["set_a"] = cert->set_a;
    c["mass_a"] = cert->mass_a;
    c["contraction_factor"] = cert->contraction_factor;
    return c;
}

json window_json(const TurnpikeProfile& profile) {
    if (!profile.has_window()) return nullptr;
    return json::array({profile.window_lo, profile.window_hi});
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error(out_path + ": cannot open file for writing");
    out << text;
    if (!out) throw std::runtime_error(out_path + ": write failed");
}

std::string sidecar_path(const std::string& out_path) {
    const auto slash = out_path.find_last_of('/');
    const auto dot = out_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + ".csv";
    return out_path.substr(0, dot) + ".csv";
}

// Returns false (after emitting a violations report) when the model fails
// validation; commands then exit with the validation failure code.
bool gate_validation(const GameModel& model, json& report, const Options& opt) {
    const auto verdict = validate(model);
    if (verdict.ok()) return true;
    report["results"]["valid"] = false;
    report["results"]["violations"] = verdict.violations;
    emit(report, opt.out);
    return false;
}

numvec initial_distribution(const GameModel& model, const std::string& choice) {
    const std::size_t nx = model.n_states();
    if (choice == "uniform")
        return numvec(nx, 1.0 / static_cast<double>(nx));
    for (std::size_t i = 0; i < nx; ++i)
        if (model.states.ids[i] == choice) {
            numvec point(nx, 0.0);
            point[i] = 1.0;
            return point;
        }
    throw std::invalid_argument("--initial: \"" + choice +
                                "\" is neither \"uniform\" nor a state label");
}

int cmd_validate(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("validate", {{"model", opt.model}});
    const auto verdict = validate(model);
    report["results"]["valid"] = verdict.ok();
    report["results"]["violations"] = verdict.violations;
    emit(report, opt.out);
    return verdict.ok() ? kOk : kInvalidModel;
}

int cmd_certify(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("certify", {{"model", opt.model}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;

    const auto cert = minorization_search(model);
    report["certificate"] = certificate_json(cert);
    report["results"]["certified"] = cert.has_value();
    if (!cert)
        report["warnings"].push_back(
            "no minorization certificate: every state has a zero transition floor; "
            "solver runs fall back to the uncertified stopping rule");
    emit(report, opt.out);
    return kOk;
}

int cmd_solve(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("solve", {{"model", opt.model},
                                        {"tol", opt.tol},
                                        {"max_iter", opt.max_iter}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;

    report["certificate"] = certificate_json(minorization_search(model));
    try {
        const SolveResult solved = solve(model, opt.tol, opt.max_iter);
        report["results"]["lambda"] = solved.lambda;
        report["results"]["s_star"] = solved.s_star;
        report["results"]["iterations"] = solved.iterations;
        report["results"]["final_residual"] = solved.final_residual;
        report["results"]["certified"] = solved.certified;
        if (!solved.certified)
            report["warnings"].push_back(
                "uncertified: stopping rule used successive differences only");
        emit(report, opt.out);
        return kOk;
    } catch (const NoConvergence& e) {
        report["results"]["error"] = e.what();
        report["results"]["lambda"] = e.best.lambda;
        report["results"]["iterations"] = e.best.iterations;
        report["results"]["final_residual"] = e.best.final_residual;
        report["results"]["certified"] = e.best.certified;
        emit(report, opt.out);
        return kNoConvergence;
    }
}

int cmd_early(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("early-turnpike", {{"model", opt.model},
                                                 {"tol", opt.tol},
                                                 {"max_iter", opt.max_iter},
                                                 {"horizon", opt.horizon},
                                                 {"epsilon", opt.epsilon},
                                                 {"tie_tol", opt.tie_tol}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;
    report["certificate"] = certificate_json(minorization_search(model));

    try {
        const SolveResult solved = solve(model, opt.tol, opt.max_iter);
        const TurnpikeProfile profile =
            early_turnpike_profile(model, solved, opt.horizon, opt.epsilon, opt.tie_tol);
        report["results"]["m"] = profile.m;
        report["results"]["window"] = window_json(profile);
        report["results"]["max_distance"] =
            *std::max_element(profile.per_step_distance.begin(),
                              profile.per_step_distance.end());
        report["results"]["lambda"] = solved.lambda;
        if (opt.out.empty()) {
            report["results"]["csv"] = nullptr;
            report["warnings"].push_back("no --out given; profile CSV not written");
        } else {
            const std::string csv = sidecar_path(opt.out);
            write_profile_csv(profile, csv);
            report["results"]["csv"] = csv;
        }
        emit(report, opt.out);
        return kOk;
    } catch (const NoConvergence& e) {
        report["results"]["error"] = e.what();
        emit(report, opt.out);
        return kNoConvergence;
    }
}

int cmd_middle(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("middle-turnpike", {{"model", opt.model},
                                                  {"tol", opt.tol},
                                                  {"max_iter", opt.max_iter},
                                                  {"horizon", opt.horizon},
                                                  {"epsilon", opt.epsilon},
                                                  {"tie_tol", opt.tie_tol},
                                                  {"initial", opt.initial}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;
    report["certificate"] = certificate_json(minorization_search(model));

    try {
        const SolveResult solved = solve(model, opt.tol, opt.max_iter);
        const numvec start = initial_distribution(model, opt.initial);
        const MiddleTurnpikeResult mid =
            middle_turnpike_profile(model, solved, opt.horizon, start, opt.epsilon,
                                    opt.tie_tol);
        const TurnpikeProfile& profile = mid.profile;
        if (profile.has_window())
            report["results"]["m"] = profile.m;
        else
            report["results"]["m"] = nullptr;
        report["results"]["window"] = window_json(profile);
        report["results"]["q_star"] = mid.q_star;
        report["results"]["unique"] = mid.unique;
        report["results"]["max_distance"] =
            *std::max_element(profile.per_step_distance.begin(),
                              profile.per_step_distance.end());
        if (!mid.unique)
            report["warnings"].push_back(
                "equilibrium set is not a singleton at every state; "
                "canonical pairs were used");
        if (opt.out.empty()) {
            report["results"]["csv"] = nullptr;
            report["warnings"].push_back("no --out given; profile CSV not written");
        } else {
            const std::string csv = sidecar_path(opt.out);
            write_profile_csv(profile, csv);
            report["results"]["csv"] = csv;
        }
        emit(report, opt.out);
        return kOk;
    } catch (const NoConvergence& e) {
        report["results"]["error"] = e.what();
        emit(report, opt.out);
        return kNoConvergence;
    }
}

int cmd_simulate(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("simulate", {{"model", opt.model},
                                           {"tol", opt.tol},
                                           {"max_iter", opt.max_iter},
                                           {"horizon", opt.horizon},
                                           {"tie_tol", opt.tie_tol},
                                           {"seed", opt.seed},
                                           {"n", opt.n},
                                           {"initial", opt.initial}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;
    report["certificate"] = certificate_json(minorization_search(model));

    try {
        const SolveResult solved = solve(model, opt.tol, opt.max_iter);
        if (!solved.certified)
            report["warnings"].push_back(
                "uncertified: stopping rule used successive differences only");
        const numvec start = initial_distribution(model, opt.initial);
        const RolloutResult run =
            rollout(model, model.terminal, opt.horizon, start, opt.n, opt.seed,
                    opt.tie_tol);
        report["results"]["lambda_hat"] = run.lambda_hat;
        report["results"]["occupation"] = run.occupation;
        report["results"]["n"] = run.n;
        report["results"]["seed"] = run.seed;
        emit(report, opt.out);
        return kOk;
    } catch (const NoConvergence& e) {
        report["results"]["error"] = e.what();
        emit(report, opt.out);
        return kNoConvergence;
    }
}

int cmd_oracle_check(const Options& opt) {
    const GameModel model = load_model(opt.model);
    json report = base_report("oracle-check", {{"model", opt.model},
                                               {"horizon", opt.horizon}});
    if (!gate_validation(model, report, opt)) return kInvalidModel;

    const numvec reference = oracle_game_value(model, model.terminal, opt.horizon);
    numvec value = model.terminal;
    for (std::size_t t = 0; t < opt.horizon; ++t) value = apply_bellman(model, value);
    double diff = 0.0;
    for (std::size_t x = 0; x < value.size(); ++x)
        diff = std::max(diff, std::fabs(value[x] - reference[x]));
    report["results"]["horizon"] = opt.horizon;
    report["results"]["max_abs_diff"] = diff;
    emit(report, opt.out);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average-cost solver and turnpike verifier for finite zero-sum "
                 "Markov games"};
    app.require_subcommand(1);

    Options opt;
    int (*handler)(const Options&) = nullptr;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--model", opt.model, "model JSON file")->required();
        cmd->add_option("--out", opt.out, "report JSON path (stdout when absent)");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "solver tolerance");
        cmd->add_option("--max-iter", opt.max_iter, "solver iteration budget");
    };
    auto add_horizon = [&](CLI::App* cmd) {
        cmd->add_option("--horizon", opt.horizon, "game horizon T")->required();
    };

    auto* validate_cmd = app.add_subcommand("validate", "check model invariants");
    add_common(validate_cmd);
    validate_cmd->callback([&] { handler = cmd_validate; });

    auto* certify_cmd = app.add_subcommand("certify", "search a minorization certificate");
    add_common(certify_cmd);
    certify_cmd->callback([&] { handler = cmd_certify; });

    auto* solve_cmd = app.add_subcommand("solve", "average cost and relative value");
    add_common(solve_cmd);
    add_solver(solve_cmd);
    solve_cmd->callback([&] { handler = cmd_solve; });

    auto* early_cmd = app.add_subcommand("early-turnpike", "strategy turnpike profile");
    add_common(early_cmd);
    add_solver(early_cmd);
    add_horizon(early_cmd);
    early_cmd->add_option("--epsilon", opt.epsilon, "distance threshold");
    early_cmd->add_option("--tie-tol", opt.tie_tol, "equilibrium tie tolerance");
    early_cmd->callback([&] { handler = cmd_early; });

    auto* middle_cmd = app.add_subcommand("middle-turnpike", "occupation turnpike profile");
    add_common(middle_cmd);
    add_solver(middle_cmd);
    add_horizon(middle_cmd);
    middle_cmd->add_option("--epsilon", opt.epsilon, "distance threshold");
    middle_cmd->add_option("--tie-tol", opt.tie_tol, "equilibrium tie tolerance");
    middle_cmd->add_option("--initial", opt.initial, "initial state label or \"uniform\"");
    middle_cmd->callback([&] { handler = cmd_middle; });

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rollout");
    add_common(simulate_cmd);
    add_solver(simulate_cmd);
    add_horizon(simulate_cmd);
    simulate_cmd->add_option("--tie-tol", opt.tie_tol, "equilibrium tie tolerance");
    simulate_cmd->add_option("--seed", opt.seed, "rollout seed");
    simulate_cmd->add_option("--n", opt.n, "number of trajectories");
    simulate_cmd->add_option("--initial", opt.initial, "initial state label or \"uniform\"");
    simulate_cmd->callback([&] { handler = cmd_simulate; });

    auto* oracle_cmd = app.add_subcommand("oracle-check",
                                          "dynamic programming operator against the "
                                          "enumeration reference");
    add_common(oracle_cmd);
    add_horizon(oracle_cmd);
    oracle_cmd->callback([&] { handler = cmd_oracle_check; });

    CLI11_PARSE(app, argc, argv);

    try {
        return handler(opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
}
