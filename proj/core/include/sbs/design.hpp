#pragma once

#include <string>
#include <vector>

#include "sbs/analytics.hpp"
#include "sbs/params.hpp"

namespace sbs::design {

enum class Branch {
    a_between_one_and_b2, // 1 < a < b^2
    a_between_b2_and_one, // b^2 < a < 1
    degenerate            // a = 1, both detunings vanish
};

struct BalanceSolution {
    double delta_l = 0.0;         // Delta
    double delta_u = 0.0;         // b * Delta
    double intensity_ratio = 0.0; // a
    Branch branch = Branch::degenerate;
    double residual = 0.0;        // |G*L| when fed back through dual_response
    bool degenerate = false;
};

/// (1 + Delta_u^2) / (1 + Delta_l^2): the intensity ratio that nulls the gain.
double balance_intensity_ratio(double delta_u, double delta_l);

/// Solve Delta^2 = (1-a)/(a-b^2), positive root. Throws InfeasibleError
/// ("infeasible branch") outside both admissible windows.
BalanceSolution balance_detuning(double a, double b);

struct Budgets {
    double max_velocity_ratio = 1e-3;
    double max_abs_gl = 0.1;
    double max_thermal_out = 0.1;
};

/// One named check: the numeric value is always reported, never just a bool.
struct Flag {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool enforced = false; // informational flags are reported but never fail
    bool pass = true;
};

struct FeasibilityReport {
    DualPumpConfig config;
    double velocity_ratio = 1.0;
    double gain_times_length = 0.0;
    double thermal_out = 0.0;
    double bandwidth = 0.0; // rad/s; 0 when the center violates a budget
    std::vector<Flag> flags;
    bool pass = false;
};

FeasibilityReport feasibility(const WaveguideParams& p, const DualPumpConfig& d,
                              const Budgets& budgets);

/// Largest symmetric signal-frequency interval around nominal within which
/// |G*L| <= gain_budget and the velocity ratio stays within
/// velocity_tolerance (relative) of its center value. Throws InfeasibleError
/// ("zero bandwidth") when the center already violates a budget. A result
/// equal to the scan window means window-limited.
double bandwidth_estimate(const WaveguideParams& p, const DualPumpConfig& d,
                          double gain_budget, double velocity_tolerance);

/// Scan window used by bandwidth_estimate, in units of gamma.
inline constexpr double bandwidth_window_gammas = 5.0;

struct SearchGrid {
    double a_from = 0.1, a_to = 0.9;
    int a_points = 9;
    double b_from = 0.05, b_to = 0.45;
    int b_points = 9;
    double intensity_from = 1e7, intensity_to = 1e8;
    int intensity_points = 4;
};

/// Enumerate balanced designs on the grid, filter by budgets, rank by
/// velocity_ratio ascending with smaller thermal_out breaking ties.
/// Throws InfeasibleError("empty feasible set") when nothing passes.
std::vector<FeasibilityReport> feasible_design_search(const WaveguideParams& p,
                                                      const SearchGrid& grid,
                                                      const Budgets& budgets);

/// Build the dual-pump config implied by a balance solution at intensity I_l.
DualPumpConfig config_from_balance(const BalanceSolution& s, double intensity_lower);

} // namespace sbs::design
