#pragma once

#include <string>
#include <vector>

#include "sbs/params.hpp"

namespace sbs::analytics {

enum class Regime { amplifying, attenuating, balanced };
enum class Channel { upper, lower, dual };

/// Steady-state response of one configuration.
struct ResponseSummary {
    double gain_per_length = 0.0; // G, 1/m, signed
    double kappa = 0.0;           // wavenumber shift, 1/m
    double velocity_ratio = 1.0;  // v_e / v_g
    double gain_slope = 0.0;      // dG/dw_s, s/m
    Regime regime = Regime::balanced;
};

/// Thermal noise photons: density (per meter) at a point plus the
/// dimensionless number value*L compared against 1.
struct ThermalDensity {
    double value = 0.0;      // photons per meter at (z, t)
    double integrated = 0.0; // value * L
    Channel channel = Channel::dual;
};

/// G = (2 g^2 / (v_g Gamma)) * I / (1 + Delta^2); same formula for both roles.
double gain_single(const WaveguideParams& p, const PumpChannel& ch);

/// kappa = (2 g^2 / (Gamma v_g)) * Delta * I / (1 + Delta^2).
double wavenumber_shift_single(const WaveguideParams& p, const PumpChannel& ch);

/// v_e/v_g; the role flips the sign of the dispersive term. Throws
/// NumericalError("superluminal/unstable regime") when the denominator <= 0.
double effective_velocity_single(const WaveguideParams& p, const PumpChannel& ch);

/// dG/dw_s; positive for the upper role, negated for the lower role.
double gain_slope_single(const WaveguideParams& p, const PumpChannel& ch);

/// Combined dual-pump response: G = G_u - G_l, kappa = kappa_u + kappa_l.
ResponseSummary dual_response(const WaveguideParams& p, const DualPumpConfig& d);

/// Detunings as seen by a signal shifted from nominal by domega_s:
/// Delta_u decreases by 2*domega_s/gamma, Delta_l increases by it.
DualPumpConfig shift_signal_frequency(const WaveguideParams& p,
                                      const DualPumpConfig& d, double domega_s);

ThermalDensity thermal_density_single(const WaveguideParams& p,
                                      const PumpChannel& ch, double z, double t);

ThermalDensity thermal_density_dual(const WaveguideParams& p,
                                    const DualPumpConfig& d, double z, double t);

struct ThermalOutReport {
    double density = 0.0; // photons per meter at z = L, transit time
    double number = 0.0;  // density * L, dimensionless
    std::vector<std::string> warnings;
};

/// Output thermal contribution in the GL << 1, Gamma L / v_g << 1 expansion.
/// Warns (does not fail) when either smallness condition is strained.
ThermalOutReport thermal_out_report(const WaveguideParams& p, const DualPumpConfig& d);

/// Dimensionless output thermal photon number (density * L).
double thermal_out(const WaveguideParams& p, const DualPumpConfig& d);

/// (e^{k z} - 1)/k with a series evaluation for |k z| < 1e-6; k = 0 gives z.
double gain_weighted_growth(double k, double z);

} // namespace sbs::analytics
