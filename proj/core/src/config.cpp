#include "sbs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbs/errors.hpp"
#include "sbs/format.hpp"

namespace sbs::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ConfigTree parse_ini(std::istream& in) {
    ConfigTree tree;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (tree.count(full))
            throw ConfigError("duplicate key '" + full + "'");
        tree[full] = value;
    }
    return tree;
}

ConfigTree parse_ini_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_ini(in);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "waveguide.g", "waveguide.gamma", "waveguide.v_g", "waveguide.length",
        "waveguide.omega_phonon", "waveguide.temperature", "waveguide.n_bar",
        "pump.upper.intensity", "pump.upper.amplitude",
        "pump.upper.detuning_scaled", "pump.upper.detuning_omega",
        "pump.lower.intensity", "pump.lower.amplitude",
        "pump.lower.detuning_scaled", "pump.lower.detuning_omega",
        "pulse.shape", "pulse.sigma_t", "pulse.t_center", "pulse.photon_number",
        "grid.nz", "grid.duration",
        "mc.trajectories", "mc.t_obs", "mc.seed",
        "budgets.max_velocity_ratio", "budgets.max_abs_gl", "budgets.max_thermal_out",
    };
    return keys;
}

void apply_overrides(ConfigTree& tree, const std::vector<std::string>& overrides) {
    const auto& keys = known_keys();
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + item + "' is not of the form key=value");
        const std::string key = item.substr(0, eq);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown override key '" + key + "'");
        tree[key] = item.substr(eq + 1);
    }
}

namespace {

std::optional<double> get_number(const ConfigTree& t, const std::string& key) {
    auto it = t.find(key);
    if (it == t.end()) return std::nullopt;
    return parse_double(it->second);
}

} // namespace

SimulationConfig load(const ConfigTree& tree) {
    for (const auto& [key, value] : tree) {
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown config key '" + key + "'");
    }
    SimulationConfig cfg;
    cfg.physics = validate(tree);

    if (auto it = tree.find("pulse.shape"); it != tree.end()) {
        if (it->second == "gaussian")
            cfg.pulse.shape = prop::PulseShape::gaussian;
        else if (it->second == "rectangular")
            cfg.pulse.shape = prop::PulseShape::rectangular;
        else
            throw ConfigError("pulse.shape must be gaussian or rectangular");
    }
    if (auto v = get_number(tree, "pulse.sigma_t")) {
        if (!(*v > 0.0)) throw ConfigError("non-positive pulse.sigma_t");
        cfg.pulse.sigma_t = *v;
        cfg.pulse.t_center = 4.0 * *v; // overridable below
    }
    if (auto v = get_number(tree, "pulse.t_center")) cfg.pulse.t_center = *v;
    if (auto v = get_number(tree, "pulse.photon_number")) {
        if (*v < 0.0) throw ConfigError("negative pulse.photon_number");
        cfg.pulse.photon_number = *v;
    }

    if (auto v = get_number(tree, "grid.nz")) {
        if (*v < 1.0 || *v != std::floor(*v))
            throw ConfigError("grid.nz must be a positive integer");
        cfg.grid.nz = static_cast<int>(*v);
    }
    if (auto v = get_number(tree, "grid.duration")) {
        if (*v < 0.0) throw ConfigError("negative grid.duration");
        cfg.grid.duration = *v;
    }

    if (auto v = get_number(tree, "mc.trajectories")) {
        if (*v < 0.0 || *v != std::floor(*v))
            throw ConfigError("mc.trajectories must be a non-negative integer");
        cfg.mc.trajectories = static_cast<int>(*v);
    }
    if (auto v = get_number(tree, "mc.t_obs")) {
        if (*v < 0.0) throw ConfigError("negative mc.t_obs");
        cfg.mc.t_obs = *v;
    }
    if (auto v = get_number(tree, "mc.seed"))
        cfg.mc.seed = static_cast<std::uint64_t>(*v);

    if (auto v = get_number(tree, "budgets.max_velocity_ratio"))
        cfg.budgets.max_velocity_ratio = *v;
    if (auto v = get_number(tree, "budgets.max_abs_gl"))
        cfg.budgets.max_abs_gl = *v;
    if (auto v = get_number(tree, "budgets.max_thermal_out"))
        cfg.budgets.max_thermal_out = *v;
    return cfg;
}

double effective_duration(const SimulationConfig& cfg) {
    if (cfg.grid.duration > 0.0) return cfg.grid.duration;
    const double transit = cfg.physics.waveguide.length / cfg.physics.waveguide.v_g;
    return transit + cfg.pulse.t_center + 6.0 * cfg.pulse.sigma_t;
}

} // namespace sbs::config
