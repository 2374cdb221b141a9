#include "zsgame/model.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace zsgame {

namespace {

using nlohmann::json;

std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

const json& require(const json& obj, const char* key, const char* describe,
                    const std::string& origin) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(origin + ": missing field \"" + key + "\" (" + describe + ")");
    return *it;
}

std::vector<std::string> read_strings(const json& arr, const std::string& path,
                                      const std::string& origin) {
    if (!arr.is_array())
        throw ParseError(origin + ": " + path + " must be an array of strings");
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_string())
            throw ParseError(origin + ": " + path + "[" + std::to_string(out.size()) +
                             "] must be a string");
        out.push_back(e.get<std::string>());
    }
    return out;
}

numvec read_numbers(const json& arr, const std::string& path, const std::string& origin) {
    if (!arr.is_array())
        throw ParseError(origin + ": " + path + " must be an array of numbers");
    numvec out;
    out.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_number())
            throw ParseError(origin + ": " + path + "[" + std::to_string(out.size()) +
                             "] must be a number");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<numvec> read_coords(const json& arr, const std::string& path,
                                std::size_t n_actions, const std::string& origin) {
    if (!arr.is_array())
        throw ParseError(origin + ": " + path + " must be an array of coordinate arrays");
    if (arr.size() != n_actions)
        throw ShapeError(origin + ": " + path + " has " + std::to_string(arr.size()) +
                         " entries for " + std::to_string(n_actions) + " actions");
    std::vector<numvec> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(read_numbers(arr[i], path + "[" + std::to_string(i) + "]", origin));
    return out;
}

Array4 read_array4(const json& arr, const char* name, std::size_t nu, std::size_t nv,
                   std::size_t nx, const std::string& origin) {
    auto shape_error = [&](const std::string& detail) {
        return ShapeError(origin + ": " + name + " " + detail + ", expected extents [" +
                          std::to_string(nu) + "][" + std::to_string(nv) + "][" +
                          std::to_string(nx) + "][" + std::to_string(nx) + "]");
    };
    if (!arr.is_array()) throw ParseError(origin + ": " + std::string(name) +
                                          " must be a 4-dimensional array");
    if (arr.size() != nu) throw shape_error("has " + std::to_string(arr.size()) +
                                            " u-slices");
    Array4 out(nu, nv, nx, nx);
    for (std::size_t u = 0; u < nu; ++u) {
        const json& ju = arr[u];
        if (!ju.is_array() || ju.size() != nv)
            throw shape_error("[" + std::to_string(u) + "] has " +
                              std::to_string(ju.is_array() ? ju.size() : 0) + " v-slices");
        for (std::size_t v = 0; v < nv; ++v) {
            const json& jv = ju[v];
            if (!jv.is_array() || jv.size() != nx)
                throw shape_error("[" + std::to_string(u) + "][" + std::to_string(v) +
                                  "] has " + std::to_string(jv.is_array() ? jv.size() : 0) +
                                  " state rows");
            for (std::size_t x = 0; x < nx; ++x) {
                const json& jx = jv[x];
                if (!jx.is_array() || jx.size() != nx)
                    throw shape_error("[" + std::to_string(u) + "][" + std::to_string(v) +
                                      "][" + std::to_string(x) + "] has " +
                                      std::to_string(jx.is_array() ? jx.size() : 0) +
                                      " entries");
                for (std::size_t y = 0; y < nx; ++y) {
                    const json& jy = jx[y];
                    if (!jy.is_number())
                        throw ParseError(origin + ": " + std::string(name) + "[" +
                                         std::to_string(u) + "][" + std::to_string(v) +
                                         "][" + std::to_string(x) + "][" +
                                         std::to_string(y) + "] must be a number");
                    out(u, v, x, y) = jy.get<double>();
                }
            }
        }
    }
    return out;
}

} // namespace

GameModel parse_model(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": line " + std::to_string(line_of(text, e.byte)) +
                         ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError(origin + ": top level must be a JSON object");

    GameModel m;

    const json& states = require(doc, "states", "state space", origin);
    if (!states.is_object())
        throw ParseError(origin + ": states must be an object");
    m.states.ids = read_strings(require(states, "ids", "state labels", origin),
                                "states.ids", origin);
    m.states.pi = read_numbers(require(states, "pi", "state weights", origin),
                               "states.pi", origin);
    const std::size_t nx = m.states.ids.size();
    if (m.states.pi.size() != nx)
        throw ShapeError(origin + ": states.pi has " + std::to_string(m.states.pi.size()) +
                         " entries for " + std::to_string(nx) + " states");

    const json& actions = require(doc, "actions", "action grids", origin);
    if (!actions.is_object())
        throw ParseError(origin + ": actions must be an object");
    m.actions.u_labels = read_strings(require(actions, "u", "minimizer actions", origin),
                                      "actions.u", origin);
    m.actions.v_labels = read_strings(require(actions, "v", "maximizer actions", origin),
                                      "actions.v", origin);
    const std::size_t nu = m.actions.u_labels.size();
    const std::size_t nv = m.actions.v_labels.size();
    if (actions.contains("u_coords"))
        m.actions.u_coords = read_coords(actions["u_coords"], "actions.u_coords", nu, origin);
    if (actions.contains("v_coords"))
        m.actions.v_coords = read_coords(actions["v_coords"], "actions.v_coords", nv, origin);

    m.rho = read_array4(require(doc, "rho", "transition kernel", origin), "rho",
                        nu, nv, nx, origin);
    m.cost = read_array4(require(doc, "g", "stage cost", origin), "g", nu, nv, nx, origin);

    const json& bound = require(doc, "G", "stage cost bound", origin);
    if (!bound.is_number())
        throw ParseError(origin + ": G must be a number");
    m.cost_bound = bound.get<double>();

    m.terminal = read_numbers(require(doc, "terminal", "terminal cost", origin),
                              "terminal", origin);
    if (m.terminal.size() != nx)
        throw ShapeError(origin + ": terminal has " + std::to_string(m.terminal.size()) +
                         " entries for " + std::to_string(nx) + " states");

    return m;
}

GameModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path);
}

std::string model_to_text(const GameModel& model) {
    json doc;
    doc["states"]["ids"] = model.states.ids;
    doc["states"]["pi"] = model.states.pi;
    doc["actions"]["u"] = model.actions.u_labels;
    doc["actions"]["v"] = model.actions.v_labels;
    if (!model.actions.u_coords.empty())
        doc["actions"]["u_coords"] = model.actions.u_coords;
    if (!model.actions.v_coords.empty())
        doc["actions"]["v_coords"] = model.actions.v_coords;

    auto pack = [&](const Array4& a) {
        json arr = json::array();
        for (std::size_t u = 0; u < a.nu(); ++u) {
            json ju = json::array();
            for (std::size_t v = 0; v < a.nv(); ++v) {
                json jv = json::array();
                for (std::size_t x = 0; x < a.nx(); ++x) {
                    json jx = json::array();
                    for (std::size_t y = 0; y < a.ny(); ++y)
                        jx.push_back(a(u, v, x, y));
                    jv.push_back(std::move(jx));
                }
                ju.push_back(std::move(jv));
            }
            arr.push_back(std::move(ju));
        }
        return arr;
    };
    doc["rho"] = pack(model.rho);
    doc["g"] = pack(model.cost);
    doc["G"] = model.cost_bound;
    doc["terminal"] = model.terminal;
    return doc.dump(2) + "\n";
}

void save_model(const GameModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open file for writing");
    out << model_to_text(model);
    if (!out)
        throw std::runtime_error(path + ": write failed");
}

} // namespace zsgame
