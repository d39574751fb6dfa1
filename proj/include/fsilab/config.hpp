#ifndef FSILAB_CONFIG_HPP
#define FSILAB_CONFIG_HPP

// Plain-text configuration files: `key = value` lines grouped under bracketed
// section headers [geometry] [fluid] [wall] [pulse] [discretization].
// '#' starts a comment. Unknown sections/keys, malformed lines, duplicates and
// invariant violations are rejected with the offending line number.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsilab/params.hpp"

namespace fsilab {

struct RunConfig {
    ProblemParams problem;
    Discretization disc;
    std::string source_path;

    // echo of every effective parameter, for reproducibility headers
    std::vector<std::pair<std::string, double>> echo() const {
        return {{"geometry.R", problem.geom.R},
                {"geometry.L", problem.geom.L},
                {"fluid.rho_f", problem.fluid.rho_f},
                {"wall.rho_s", problem.wall.rho_s},
                {"wall.h", problem.wall.h},
                {"wall.C0", problem.wall.C0},
                {"wall.C1", problem.wall.C1},
                {"wall.D0", problem.wall.D0},
                {"wall.D1", problem.wall.D1},
                {"pulse.p_max", problem.pulse.p_max},
                {"pulse.t_max", problem.pulse.t_max},
                {"pulse.p_out", problem.pulse.p_out},
                {"discretization.J", static_cast<double>(disc.J)},
                {"discretization.Nz", static_cast<double>(disc.Nz)},
                {"discretization.Nr", static_cast<double>(disc.Nr)},
                {"discretization.dt", disc.dt},
                {"discretization.n_steps", static_cast<double>(disc.n_steps)},
                {"discretization.beta", disc.beta},
                {"discretization.theta", disc.theta}};
    }
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_number(const std::string& text, const std::string& path, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": not a number: '" + text + "'");
    }
    if (pos != text.size())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": trailing characters after number: '" +
                          text + "'");
    return v;
}

} // namespace detail

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    static const std::map<std::string, std::set<std::string>> schema = {
        {"geometry", {"R", "L"}},
        {"fluid", {"rho_f"}},
        {"wall", {"rho_s", "h", "C0", "C1", "D0", "D1"}},
        {"pulse", {"p_max", "t_max", "p_out"}},
        {"discretization", {"J", "Nz", "Nr", "dt", "n_steps", "beta", "theta"}},
    };
    static const std::vector<std::string> required = {
        "geometry.R", "geometry.L", "fluid.rho_f", "wall.rho_s", "wall.h",
        "wall.C0",    "wall.C1",    "pulse.p_max", "pulse.t_max"};

    std::map<std::string, double> seen;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed section header '" +
                                  raw + "'");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!schema.count(section))
                throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown section '[" + section +
                                  "]'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value', got '" +
                              raw + "'");
        if (section.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": key before any [section] header");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (!schema.at(section).count(key))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' in [" +
                              section + "]");
        const std::string full = section + "." + key;
        if (seen.count(full))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" + full + "'");
        seen[full] = detail::parse_number(val, path, line_no);
    }

    std::string missing;
    for (const auto& req : required)
        if (!seen.count(req)) missing += (missing.empty() ? "" : ", ") + req;
    if (!missing.empty())
        throw ConfigError(path + ": missing required keys: " + missing);

    RunConfig cfg;
    cfg.source_path = path;
    auto get = [&](const std::string& k, double dflt) {
        auto it = seen.find(k);
        return it == seen.end() ? dflt : it->second;
    };
    cfg.problem.geom.R = seen.at("geometry.R");
    cfg.problem.geom.L = seen.at("geometry.L");
    cfg.problem.fluid.rho_f = seen.at("fluid.rho_f");
    cfg.problem.wall.rho_s = seen.at("wall.rho_s");
    cfg.problem.wall.h = seen.at("wall.h");
    cfg.problem.wall.C0 = seen.at("wall.C0");
    cfg.problem.wall.C1 = seen.at("wall.C1");
    cfg.problem.wall.D0 = get("wall.D0", 0.0);
    cfg.problem.wall.D1 = get("wall.D1", 0.0);
    cfg.problem.pulse.p_max = seen.at("pulse.p_max");
    cfg.problem.pulse.t_max = seen.at("pulse.t_max");
    cfg.problem.pulse.p_out = get("pulse.p_out", 0.0);
    cfg.disc.J = static_cast<int>(get("discretization.J", 64));
    cfg.disc.Nz = static_cast<int>(get("discretization.Nz", 129));
    cfg.disc.Nr = static_cast<int>(get("discretization.Nr", 65));
    cfg.disc.dt = get("discretization.dt", 1e-4);
    cfg.disc.n_steps = static_cast<long>(get("discretization.n_steps", 120));
    cfg.disc.beta = get("discretization.beta", 1.0);
    cfg.disc.theta = get("discretization.theta", 0.5);

    try {
        cfg.problem.validate();
        cfg.disc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

} // namespace fsilab

#endif
