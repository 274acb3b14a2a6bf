#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "sbs/params.hpp"

namespace sbs::prop {

enum class Mode { full, adiabatic };
enum class PulseShape { gaussian, rectangular };

struct PulseSpec {
    PulseShape shape = PulseShape::gaussian;
    double sigma_t = 0.0;       // temporal width parameter, s
    double t_center = 0.0;      // s
    double photon_number = 1.0; // integral of input density over z

    /// Input amplitude at the z = 0 boundary, units 1/sqrt(m).
    double amplitude(double t, double v_g) const;
    /// Bandwidth warning for adiabatic runs: 1/sigma_t should be < gamma/10.
    bool bandwidth_ok(double gamma) const { return 1.0 / sigma_t < gamma / 10.0; }
};

/// Characteristics-aligned space-time grid: dz = v_g * dt exactly
/// (Courant number 1), dz * nz = L.
struct Grid {
    int nz = 0;
    double dz = 0.0;
    double dt = 0.0;
    std::int64_t nt = 0;

    static Grid make(const WaveguideParams& p, int nz, double duration);
};

struct FieldState {
    std::vector<std::complex<double>> psi;     // signal envelope, 1/sqrt(m)
    std::vector<std::complex<double>> q_upper; // phonon envelope, 1/sqrt(m)
    std::vector<std::complex<double>> q_lower;
    double time = 0.0;
};

struct SimResult {
    std::vector<double> output_density;              // |psi(L, t_k)|^2
    std::vector<std::complex<double>> output_field;  // psi(L, t_k)
    std::vector<double> input_density;               // |psi(0, t_k)|^2
    std::optional<std::vector<double>> density_map;  // row-major (t_snap, z)
    double measured_gain = 0.0;          // ln(E_out/E_in) / (2L), 1/m
    double measured_delay = 0.0;         // filled by measure_group_delay
    double measured_velocity_ratio = 1.0;
    double noise_floor = 0.0;            // photons, when noise enabled
    Grid grid;
    Mode mode = Mode::adiabatic;
};

struct PropagateOptions {
    bool record_density_map = false;
    int density_map_rows = 64;
};

/// Mean-field (noise-free) integration of the coupled signal-phonon
/// envelope equations. FULL mode keeps phonon dynamics with an exact
/// exponential sub-step; ADIABATIC mode applies the eliminated local
/// (G - i kappa) factor per cell per step. Throws NumericalError on
/// non-finite fields.
SimResult propagate_mean_field(const WaveguideParams& p, const DualPumpConfig& d,
                               const PulseSpec& pulse, const Grid& grid, Mode mode,
                               const PropagateOptions& opts = {});

struct DelayMeasurement {
    double delay = 0.0; // s, relative to the reference run
    double velocity_ratio = 1.0;
};

/// Output-centroid delay versus a g = 0 reference run on the same grid and
/// pulse; velocity_ratio = 1 / (1 + v_g * delay / L). Throws NumericalError
/// when a centroid is undefined (zero-energy output).
DelayMeasurement measure_group_delay(const SimResult& result, const SimResult& reference,
                                     const WaveguideParams& p);

/// Normally-ordered thermal noise density N(z, t_obs) by direct 2-D
/// trapezoidal quadrature of the squared Green's-function kernel against the
/// delta-correlated noise strengths.
double thermal_quadrature_at(const WaveguideParams& p, const DualPumpConfig& d,
                             double z, double t_obs, int nz_quad = 2000,
                             int nt_quad = 2000);

/// Profile of the quadrature over n_points positions in (0, L].
std::vector<double> thermal_quadrature(const WaveguideParams& p, const DualPumpConfig& d,
                                       double t_obs, int n_points = 32,
                                       int nz_quad = 2000, int nt_quad = 2000);

struct McResult {
    std::vector<double> mean_density; // per cell, at t_obs
    std::vector<double> std_error;    // standard error of the mean, per cell
    int trajectories = 0;
    Grid grid;
};

/// Ensemble of noise-driven integrations with zero input pulse. Per cell and
/// step each phonon channel receives an independent complex circular Gaussian
/// increment; the upper channel's variance carries gamma*(n_bar+1), the
/// lower's gamma*n_bar, so the accumulated |psi|^2 is the normally-ordered
/// density. Deterministic for fixed (seed, trajectories, grid): every
/// trajectory derives its stream from (seed, index) and the reduction is in
/// index order regardless of scheduling.
McResult monte_carlo_density(const WaveguideParams& p, const DualPumpConfig& d,
                             const Grid& grid, double t_obs, int trajectories,
                             std::uint64_t seed, int threads = 0);

} // namespace sbs::prop
