#include "sbs/params.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "sbs/constants.hpp"
#include "sbs/format.hpp"

namespace sbs {

std::string format_shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_sci17(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::scientific, 16);
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    // Skip leading whitespace and an optional '+' (from_chars accepts neither).
    size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos)
        throw ConfigError("empty numeric value");
    size_t end = s.find_last_not_of(" \t") + 1;
    std::string_view sv(s.data() + begin, end - begin);
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc{} || ptr != sv.data() + sv.size())
        throw ConfigError("invalid numeric value '" + s + "'");
    return out;
}

double thermal_occupation(double omega_phonon, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = constants::hbar * omega_phonon /
                     (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

double scaled_detuning(double delta_omega, double gamma) {
    return 2.0 * delta_omega / gamma;
}

namespace {

double require_number(const ConfigTree& raw, const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end())
        throw ConfigError("missing required field '" + key + "'");
    return parse_double(it->second);
}

std::optional<double> optional_number(const ConfigTree& raw, const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    return parse_double(it->second);
}

void require_positive(double v, const std::string& name) {
    if (!(v > 0.0))
        throw ConfigError("non-positive " + name);
}

PumpChannel read_pump(const ConfigTree& raw, const std::string& section,
                      double length, PumpRole role) {
    PumpChannel ch;
    ch.role = role;
    auto intensity = optional_number(raw, section + ".intensity");
    auto amplitude = optional_number(raw, section + ".amplitude");
    if (intensity && amplitude)
        throw ConfigError(section + ": give intensity or amplitude, not both");
    if (intensity)
        ch.intensity = *intensity;
    else if (amplitude)
        ch.intensity = length * (*amplitude) * (*amplitude);
    else
        throw ConfigError("missing required field '" + section + ".intensity'");
    if (ch.intensity < 0.0)
        throw ConfigError(section + ": negative intensity");

    auto scaled = optional_number(raw, section + ".detuning_scaled");
    auto omega = optional_number(raw, section + ".detuning_omega");
    if (scaled && omega)
        throw ConfigError(section + ": give detuning_scaled or detuning_omega, not both");
    if (scaled)
        ch.detuning_scaled = *scaled;
    else if (omega)
        ch.detuning_scaled = 0.0; // filled by caller (needs gamma)
    else
        throw ConfigError("missing required field '" + section + ".detuning_scaled'");
    if (!std::isfinite(ch.detuning_scaled))
        throw ConfigError(section + ": detuning not finite");
    return ch;
}

} // namespace

ValidatedConfig validate(const ConfigTree& raw) {
    ValidatedConfig cfg;
    WaveguideParams& w = cfg.waveguide;
    w.g = require_number(raw, "waveguide.g");
    if (w.g < 0.0) throw ConfigError("negative coupling g");
    w.gamma = require_number(raw, "waveguide.gamma");
    require_positive(w.gamma, "gamma");
    w.v_g = require_number(raw, "waveguide.v_g");
    require_positive(w.v_g, "group velocity");
    w.length = require_number(raw, "waveguide.length");
    require_positive(w.length, "length");
    w.omega_phonon = require_number(raw, "waveguide.omega_phonon");
    require_positive(w.omega_phonon, "phonon frequency");

    auto temperature = optional_number(raw, "waveguide.temperature");
    auto n_bar = optional_number(raw, "waveguide.n_bar");
    if (temperature && *temperature < 0.0)
        throw ConfigError("negative temperature");
    if (n_bar && *n_bar < 0.0)
        throw ConfigError("negative n_bar");
    if (!temperature && !n_bar)
        throw ConfigError("missing required field 'waveguide.temperature' or 'waveguide.n_bar'");
    if (temperature) {
        w.temperature = *temperature;
        const double derived = thermal_occupation(w.omega_phonon, *temperature);
        if (n_bar) {
            const double scale = std::max(std::abs(derived), std::abs(*n_bar));
            if (scale > 0.0 && std::abs(derived - *n_bar) > 1e-3 * scale)
                throw ConfigError("temperature/n_bar disagreement: Bose-Einstein gives n_bar=" +
                                  format_shortest(derived) + ", config says " +
                                  format_shortest(*n_bar));
            w.n_bar = *n_bar;
        } else {
            w.n_bar = derived;
        }
    } else {
        w.n_bar = *n_bar;
    }

    DualPumpConfig& d = cfg.pumps;
    d.upper = read_pump(raw, "pump.upper", w.length, PumpRole::upper);
    d.lower = read_pump(raw, "pump.lower", w.length, PumpRole::lower);
    if (auto omega = optional_number(raw, "pump.upper.detuning_omega"))
        d.upper.detuning_scaled = scaled_detuning(*omega, w.gamma);
    if (auto omega = optional_number(raw, "pump.lower.detuning_omega"))
        d.lower.detuning_scaled = scaled_detuning(*omega, w.gamma);

    d.a = d.lower.intensity > 0.0 ? d.upper.intensity / d.lower.intensity : 0.0;
    d.b = d.lower.detuning_scaled != 0.0
              ? d.upper.detuning_scaled / d.lower.detuning_scaled
              : 0.0;
    return cfg;
}

ConfigTree canonical_echo(const ValidatedConfig& cfg) {
    ConfigTree t;
    const WaveguideParams& w = cfg.waveguide;
    t["waveguide.g"] = format_shortest(w.g);
    t["waveguide.gamma"] = format_shortest(w.gamma);
    t["waveguide.v_g"] = format_shortest(w.v_g);
    t["waveguide.length"] = format_shortest(w.length);
    t["waveguide.omega_phonon"] = format_shortest(w.omega_phonon);
    if (w.temperature)
        t["waveguide.temperature"] = format_shortest(*w.temperature);
    t["waveguide.n_bar"] = format_shortest(w.n_bar);
    t["pump.upper.intensity"] = format_shortest(cfg.pumps.upper.intensity);
    t["pump.upper.detuning_scaled"] = format_shortest(cfg.pumps.upper.detuning_scaled);
    t["pump.lower.intensity"] = format_shortest(cfg.pumps.lower.intensity);
    t["pump.lower.detuning_scaled"] = format_shortest(cfg.pumps.lower.detuning_scaled);
    return t;
}

} // namespace sbs
