#include "sbs/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbs/errors.hpp"
#include "sbs/format.hpp"

namespace sbs::design {

double balance_intensity_ratio(double delta_u, double delta_l) {
    return (1.0 + delta_u * delta_u) / (1.0 + delta_l * delta_l);
}

DualPumpConfig config_from_balance(const BalanceSolution& s, double intensity_lower) {
    DualPumpConfig d;
    d.lower = {intensity_lower, s.delta_l, PumpRole::lower};
    d.upper = {s.intensity_ratio * intensity_lower, s.delta_u, PumpRole::upper};
    d.a = s.intensity_ratio;
    d.b = s.delta_l != 0.0 ? s.delta_u / s.delta_l : 0.0;
    return d;
}

BalanceSolution balance_detuning(double a, double b) {
    BalanceSolution s;
    s.intensity_ratio = a;
    if (!(a > 0.0) || !std::isfinite(b))
        throw InfeasibleError("infeasible branch: require a > 0 and finite b");
    if (a == 1.0) {
        s.degenerate = true;
        s.branch = Branch::degenerate;
        s.delta_l = s.delta_u = 0.0;
        s.residual = 0.0;
        return s;
    }
    const double b2 = b * b;
    const double ratio = (1.0 - a) / (a - b2);
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw InfeasibleError("infeasible branch: (1-a)/(a-b^2) = " +
                              format_shortest(ratio) + " is not positive");
    s.delta_l = std::sqrt(ratio);
    s.delta_u = b * s.delta_l;
    s.branch = a > 1.0 ? Branch::a_between_one_and_b2 : Branch::a_between_b2_and_one;
    // Residual in G/G_u units; intensities cancel out of the ratio.
    const double gu = a / (1.0 + s.delta_u * s.delta_u);
    const double gl = 1.0 / (1.0 + s.delta_l * s.delta_l);
    s.residual = std::abs(gu - gl) / std::max(gu, gl);
    return s;
}

namespace {

struct CenterResponse {
    analytics::ResponseSummary summary;
    bool velocity_ok = true;
};

CenterResponse evaluate(const WaveguideParams& p, const DualPumpConfig& d) {
    CenterResponse c;
    try {
        c.summary = analytics::dual_response(p, d);
    } catch (const NumericalError&) {
        c.velocity_ok = false;
    }
    return c;
}

} // namespace

double bandwidth_estimate(const WaveguideParams& p, const DualPumpConfig& d,
                          double gain_budget, double velocity_tolerance) {
    if (gain_budget <= 0.0)
        throw InfeasibleError("zero bandwidth: gain budget is not positive");
    const auto center = evaluate(p, d);
    if (!center.velocity_ok ||
        std::abs(center.summary.gain_per_length * p.length) > gain_budget)
        throw InfeasibleError("zero bandwidth: center point violates a budget");
    const double v0 = center.summary.velocity_ratio;

    auto ok = [&](double domega) {
        for (double sign : {+1.0, -1.0}) {
            const auto shifted = analytics::shift_signal_frequency(p, d, sign * domega);
            try {
                const auto r = analytics::dual_response(p, shifted);
                if (std::abs(r.gain_per_length * p.length) > gain_budget) return false;
                if (std::abs(r.velocity_ratio / v0 - 1.0) > velocity_tolerance) return false;
            } catch (const NumericalError&) {
                return false;
            }
        }
        return true;
    };

    const double window = bandwidth_window_gammas * p.gamma;
    // Dense scan to find the first violation; the envelope need not be
    // monotone, so bisection alone could overshoot past a narrow dip.
    const int scan_points = 400;
    double lo = 0.0, hi = window;
    bool limited = false;
    for (int i = 1; i <= scan_points; ++i) {
        const double x = window * static_cast<double>(i) / scan_points;
        if (!ok(x)) {
            hi = x;
            lo = window * static_cast<double>(i - 1) / scan_points;
            limited = true;
            break;
        }
    }
    if (!limited) return window; // window-limited
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

FeasibilityReport feasibility(const WaveguideParams& p, const DualPumpConfig& d,
                              const Budgets& budgets) {
    FeasibilityReport r;
    r.config = d;
    const auto center = evaluate(p, d);
    r.gain_times_length = center.summary.gain_per_length * p.length;
    r.velocity_ratio = center.velocity_ok ? center.summary.velocity_ratio
                                          : std::numeric_limits<double>::infinity();
    r.thermal_out = analytics::thermal_out(p, d);
    try {
        r.bandwidth = bandwidth_estimate(p, d, budgets.max_abs_gl, 0.5);
    } catch (const InfeasibleError&) {
        r.bandwidth = 0.0;
    }

    auto push = [&](const std::string& name, double value, double limit, bool enforced) {
        Flag f{name, value, limit, enforced, value <= limit};
        r.flags.push_back(f);
    };
    push("velocity_ratio", r.velocity_ratio, budgets.max_velocity_ratio, true);
    push("abs_gain_times_length", std::abs(r.gain_times_length), budgets.max_abs_gl, true);
    push("thermal_out", r.thermal_out, budgets.max_thermal_out, true);
    // Validity margins, reported with their conventional smallness limits.
    push("transit_gamma", p.gamma * p.length / p.v_g, 0.1, false);
    const double adiabatic =
        p.g * std::sqrt(std::max(d.upper.intensity, d.lower.intensity)) / p.gamma;
    push("adiabatic_margin", adiabatic, 1.0, false);

    r.pass = std::all_of(r.flags.begin(), r.flags.end(),
                         [](const Flag& f) { return !f.enforced || f.pass; });
    return r;
}

std::vector<FeasibilityReport> feasible_design_search(const WaveguideParams& p,
                                                      const SearchGrid& grid,
                                                      const Budgets& budgets) {
    std::vector<FeasibilityReport> out;
    auto axis = [](double from, double to, int points, int i) {
        if (points <= 1) return from;
        return from + (to - from) * static_cast<double>(i) / (points - 1);
    };
    for (int ia = 0; ia < grid.a_points; ++ia) {
        const double a = axis(grid.a_from, grid.a_to, grid.a_points, ia);
        for (int ib = 0; ib < grid.b_points; ++ib) {
            const double b = axis(grid.b_from, grid.b_to, grid.b_points, ib);
            BalanceSolution sol;
            try {
                sol = balance_detuning(a, b);
            } catch (const InfeasibleError&) {
                continue;
            }
            if (sol.degenerate) continue;
            for (int ii = 0; ii < grid.intensity_points; ++ii) {
                const double intensity = axis(grid.intensity_from, grid.intensity_to,
                                              grid.intensity_points, ii);
                const auto cfg = config_from_balance(sol, intensity);
                auto report = feasibility(p, cfg, budgets);
                if (report.pass) out.push_back(std::move(report));
            }
        }
    }
    if (out.empty())
        throw InfeasibleError("empty feasible set");
    std::stable_sort(out.begin(), out.end(),
                     [](const FeasibilityReport& x, const FeasibilityReport& y) {
                         if (x.velocity_ratio != y.velocity_ratio)
                             return x.velocity_ratio < y.velocity_ratio;
                         return x.thermal_out < y.thermal_out;
                     });
    return out;
}

} // namespace sbs::design
