#include "sbs/analytics.hpp"

#include <cmath>

#include "sbs/errors.hpp"
#include "sbs/format.hpp"

namespace sbs::analytics {

namespace {

double coupling_scale(const WaveguideParams& p) {
    return 2.0 * p.g * p.g / (p.v_g * p.gamma);
}

// I * (1 - D^2) / (1 + D^2)^2, the dispersive kernel of the velocity formula.
double dispersive_term(const PumpChannel& ch) {
    const double d2 = ch.detuning_scaled * ch.detuning_scaled;
    const double den = 1.0 + d2;
    return ch.intensity * (1.0 - d2) / (den * den);
}

double slope_kernel(const PumpChannel& ch) {
    const double d2 = ch.detuning_scaled * ch.detuning_scaled;
    const double den = 1.0 + d2;
    return ch.intensity * ch.detuning_scaled / (den * den);
}

double velocity_from_bracket(double bracket) {
    if (bracket <= 0.0)
        throw NumericalError("superluminal/unstable regime: velocity denominator " +
                             format_shortest(bracket));
    return 1.0 / bracket;
}

Regime classify(double gl, double gul) {
    if (std::abs(gl) < 1e-12 * std::max(std::abs(gul), 1e-300))
        return Regime::balanced;
    return gl > 0.0 ? Regime::amplifying : Regime::attenuating;
}

} // namespace

double gain_single(const WaveguideParams& p, const PumpChannel& ch) {
    const double d2 = ch.detuning_scaled * ch.detuning_scaled;
    return coupling_scale(p) * ch.intensity / (1.0 + d2);
}

double wavenumber_shift_single(const WaveguideParams& p, const PumpChannel& ch) {
    return gain_single(p, ch) * ch.detuning_scaled;
}

double effective_velocity_single(const WaveguideParams& p, const PumpChannel& ch) {
    const double strength = 4.0 * p.g * p.g / (p.gamma * p.gamma);
    const double sign = ch.role == PumpRole::upper ? 1.0 : -1.0;
    return velocity_from_bracket(1.0 + sign * strength * dispersive_term(ch));
}

double gain_slope_single(const WaveguideParams& p, const PumpChannel& ch) {
    const double strength = 8.0 * p.g * p.g / (p.v_g * p.gamma * p.gamma);
    const double sign = ch.role == PumpRole::upper ? 1.0 : -1.0;
    return sign * strength * slope_kernel(ch);
}

ResponseSummary dual_response(const WaveguideParams& p, const DualPumpConfig& d) {
    ResponseSummary r;
    const double gu = gain_single(p, d.upper);
    const double gl = gain_single(p, d.lower);
    r.gain_per_length = gu - gl;
    r.kappa = wavenumber_shift_single(p, d.upper) + wavenumber_shift_single(p, d.lower);

    const double strength = 4.0 * p.g * p.g / (p.gamma * p.gamma);
    r.velocity_ratio = velocity_from_bracket(
        1.0 + strength * (dispersive_term(d.upper) - dispersive_term(d.lower)));

    const double slope_strength = 8.0 * p.g * p.g / (p.v_g * p.gamma * p.gamma);
    r.gain_slope = slope_strength * (slope_kernel(d.upper) + slope_kernel(d.lower));
    r.regime = classify(r.gain_per_length, gu);
    return r;
}

DualPumpConfig shift_signal_frequency(const WaveguideParams& p,
                                      const DualPumpConfig& d, double domega_s) {
    DualPumpConfig out = d;
    const double shift = 2.0 * domega_s / p.gamma;
    out.upper.detuning_scaled -= shift; // dw_u = w_u - w_s - Omega
    out.lower.detuning_scaled += shift; // dw_l = w_s - w_l - Omega
    out.b = out.lower.detuning_scaled != 0.0
                ? out.upper.detuning_scaled / out.lower.detuning_scaled
                : 0.0;
    return out;
}

double gain_weighted_growth(double k, double z) {
    const double kz = k * z;
    if (std::abs(kz) < 1e-6)
        return z * (1.0 + 0.5 * kz + kz * kz / 6.0);
    return std::expm1(kz) / k;
}

namespace {

double thermal_value(const WaveguideParams& p, double weight, double exponent,
                     double z, double t) {
    // weight: g^2 [I nbar terms] / v_g^2; exponent: 2G (signed).
    if (t <= 0.0 || z <= 0.0) return 0.0; // avoids 0 * inf when e^{2Gz} overflows
    const double time_factor = -std::expm1(-p.gamma * t);
    return weight * time_factor * gain_weighted_growth(exponent, z);
}

} // namespace

ThermalDensity thermal_density_single(const WaveguideParams& p,
                                      const PumpChannel& ch, double z, double t) {
    ThermalDensity out;
    out.channel = ch.role == PumpRole::upper ? Channel::upper : Channel::lower;
    const double g2 = p.g * p.g;
    if (ch.role == PumpRole::upper) {
        const double weight = g2 * ch.intensity * (p.n_bar + 1.0) / (p.v_g * p.v_g);
        out.value = thermal_value(p, weight, 2.0 * gain_single(p, ch), z, t);
    } else {
        const double weight = g2 * ch.intensity * p.n_bar / (p.v_g * p.v_g);
        out.value = thermal_value(p, weight, -2.0 * gain_single(p, ch), z, t);
    }
    out.integrated = out.value * p.length;
    return out;
}

ThermalDensity thermal_density_dual(const WaveguideParams& p,
                                    const DualPumpConfig& d, double z, double t) {
    ThermalDensity out;
    out.channel = Channel::dual;
    const double g2 = p.g * p.g;
    const double weight = g2 *
        (d.lower.intensity * p.n_bar + d.upper.intensity * (p.n_bar + 1.0)) /
        (p.v_g * p.v_g);
    const double g_net = gain_single(p, d.upper) - gain_single(p, d.lower);
    out.value = thermal_value(p, weight, 2.0 * g_net, z, t);
    out.integrated = out.value * p.length;
    return out;
}

ThermalOutReport thermal_out_report(const WaveguideParams& p, const DualPumpConfig& d) {
    ThermalOutReport r;
    const double g2 = p.g * p.g;
    const double occupancy =
        d.lower.intensity * p.n_bar + d.upper.intensity * (p.n_bar + 1.0);
    r.density = g2 * p.gamma * p.length * p.length /
                (p.v_g * p.v_g * p.v_g) * occupancy;
    r.number = r.density * p.length;

    const double transit = p.gamma * p.length / p.v_g;
    if (transit > 0.1)
        r.warnings.push_back("Gamma*L/v_g = " + format_shortest(transit) +
                             " strains the transit-time expansion");
    const double gl = (gain_single(p, d.upper) - gain_single(p, d.lower)) * p.length;
    if (std::abs(gl) > 0.1)
        r.warnings.push_back("|G*L| = " + format_shortest(std::abs(gl)) +
                             " strains the zero-gain expansion");
    return r;
}

double thermal_out(const WaveguideParams& p, const DualPumpConfig& d) {
    return thermal_out_report(p, d).number;
}

} // namespace sbs::analytics
