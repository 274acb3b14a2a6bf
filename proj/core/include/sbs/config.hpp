#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbs/design.hpp"
#include "sbs/params.hpp"
#include "sbs/propagator.hpp"

namespace sbs::config {

/// Parse INI-style text (sections, key = value, '#' comments) into a flat
/// dotted-key tree. Section [pump.upper] + key intensity becomes
/// "pump.upper.intensity".
ConfigTree parse_ini(std::istream& in);
ConfigTree parse_ini_file(const std::filesystem::path& path);

/// Apply "dotted.key=value" overrides. Unknown keys are errors, not warnings.
void apply_overrides(ConfigTree& tree, const std::vector<std::string>& overrides);

/// Every key the config format recognizes.
const std::vector<std::string>& known_keys();

struct GridConfig {
    int nz = 400;
    double duration = 0.0; // s; 0 means transit plus pulse support
};

struct McConfig {
    int trajectories = 0;
    double t_obs = 0.0; // s; 0 means 3/gamma
    std::optional<std::uint64_t> seed;
};

/// Full run configuration: validated physics plus simulation settings.
struct SimulationConfig {
    ValidatedConfig physics;
    prop::PulseSpec pulse{prop::PulseShape::gaussian, 1e-7, 4e-7, 1.0};
    GridConfig grid;
    McConfig mc;
    design::Budgets budgets;
};

SimulationConfig load(const ConfigTree& tree);

/// Grid duration actually used for a mean-field run.
double effective_duration(const SimulationConfig& cfg);

} // namespace sbs::config
