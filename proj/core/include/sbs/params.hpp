#pragma once

#include <map>
#include <optional>
#include <string>

#include "sbs/errors.hpp"

namespace sbs {

/// Flat key-value view of a parsed config; keys are dotted paths such as
/// "waveguide.g" or "pump.upper.intensity".
using ConfigTree = std::map<std::string, std::string>;

enum class PumpRole { upper, lower };

/// Physical constants of the device. All frequencies and rates are angular
/// (rad/s); gamma is the phonon energy damping rate (amplitudes decay at
/// gamma/2).
struct WaveguideParams {
    double g = 0.0;            // photon-phonon coupling rate, rad/s, >= 0
    double gamma = 0.0;        // phonon energy damping rate, rad/s, > 0
    double v_g = 0.0;          // optical group velocity, m/s, > 0
    double length = 0.0;       // waveguide length, m, > 0
    double omega_phonon = 0.0; // phonon angular frequency, rad/s, > 0
    std::optional<double> temperature; // bath temperature, K, >= 0
    double n_bar = 0.0;        // mean thermal phonon number, >= 0
};

/// One classical pump: dimensionless intensity I = L|E|^2 and scaled
/// detuning 2*dw/gamma.
struct PumpChannel {
    double intensity = 0.0;
    double detuning_scaled = 0.0;
    PumpRole role = PumpRole::upper;
};

struct DualPumpConfig {
    PumpChannel upper;
    PumpChannel lower;
    double a = 0.0; // intensity ratio upper/lower (0 when lower.intensity == 0)
    double b = 0.0; // detuning ratio upper/lower (0 when lower.detuning == 0)
};

/// Delta-correlated phonon noise strengths. Normally ordered <F+ F> has
/// strength gamma*n_bar, anti-normally ordered <F F+> has gamma*(n_bar+1),
/// both per unit (time x length). Upper and lower processes are independent
/// and phase-insensitive (<FF> = 0).
struct LangevinNoiseSpec {
    double gamma = 0.0;
    double n_bar = 0.0;

    double normal_strength() const { return gamma * n_bar; }
    double antinormal_strength() const { return gamma * (n_bar + 1.0); }
};

struct ValidatedConfig {
    WaveguideParams waveguide;
    DualPumpConfig pumps;

    LangevinNoiseSpec noise() const { return {waveguide.gamma, waveguide.n_bar}; }
};

/// Bose-Einstein occupation at angular frequency omega_phonon and
/// temperature T; returns 0 exactly at T = 0.
double thermal_occupation(double omega_phonon, double temperature);

/// 2*delta_omega/gamma, sign preserving.
double scaled_detuning(double delta_omega, double gamma);

/// Build invariant-checked types from a raw config tree. Throws ConfigError
/// on missing fields, non-positive rates/lengths, or a temperature/n_bar
/// pair that disagrees under Bose-Einstein by more than 0.1%.
ValidatedConfig validate(const ConfigTree& raw);

/// Canonical key-value echo of a validated config; re-validating the echo
/// reproduces identical values bit-for-bit.
ConfigTree canonical_echo(const ValidatedConfig& cfg);

} // namespace sbs
