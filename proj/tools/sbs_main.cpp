// Command-line front end: parse config, dispatch to the closed-form engine,
// the balance/feasibility solver, the space-time integrator, or the sweep
// writer, with reproducible seeds and manifest sidecars.

#include <chrono>
#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbs/analytics.hpp"
#include "sbs/config.hpp"
#include "sbs/design.hpp"
#include "sbs/errors.hpp"
#include "sbs/format.hpp"
#include "sbs/propagator.hpp"
#include "sbs/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
    std::string config_path;
    std::string output_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    bool human = false;
    int verbosity = 0;
};

std::string fmt(double v, bool human) {
    if (human) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return buf;
    }
    return sbs::format_sci17(v);
}

sbs::config::SimulationConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty())
        throw sbs::ConfigError("a config file is required (-c/--config)");
    auto tree = sbs::config::parse_ini_file(opts.config_path);
    sbs::config::apply_overrides(tree, opts.overrides);
    return sbs::config::load(tree);
}

/// Output path resolution: explicit -o wins; otherwise SBS_OUTPUT_DIR (with a
/// default file name) when set; otherwise stdout (empty path).
fs::path resolve_output(const CommonOpts& opts, const std::string& default_name) {
    if (!opts.output_path.empty()) return opts.output_path;
    if (const char* dir = std::getenv("SBS_OUTPUT_DIR"))
        return fs::path(dir) / default_name;
    return {};
}

std::uint64_t resolve_seed(const CommonOpts& opts, const sbs::config::McConfig& mc) {
    if (opts.seed) return *opts.seed;
    if (mc.seed) return *mc.seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    std::cerr << "seed not given; generated seed = " << s << "\n";
    return s;
}

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void emit_manifest(const sbs::config::SimulationConfig& cfg, const fs::path& output,
                   std::uint64_t seed, const std::string& grid,
                   const std::string& solver_mode) {
    sbs::sweep::RunManifest m;
    m.config_echo = sbs::canonical_echo(cfg.physics);
    m.seed = seed;
    m.grid = grid;
    m.solver_mode = solver_mode;
    m.tool_version = sbs::sweep::tool_version();
    m.timestamp = now_iso8601();
    m.content_hash = sbs::sweep::fnv1a_file_hex(output);
    sbs::sweep::write_manifest(m, fs::path(output.string() + ".manifest.json"));
}

void write_text(const fs::path& dest, const std::string& text) {
    if (dest.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(dest, std::ios::binary);
    if (!out) throw sbs::ConfigError("cannot open '" + dest.string() + "' for writing");
    out << text;
}

int cmd_analytic(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto& p = cfg.physics.waveguide;
    const auto& d = cfg.physics.pumps;
    const auto r = sbs::analytics::dual_response(p, d);
    const auto thermal = sbs::analytics::thermal_out_report(p, d);
    std::ostringstream out;
    const bool h = opts.human;
    out << "GL=" << fmt(r.gain_per_length * p.length, h) << "\n"
        << "kappaL=" << fmt(r.kappa * p.length, h) << "\n"
        << "velocity_ratio=" << fmt(r.velocity_ratio, h) << "\n"
        << "gain_slope=" << fmt(r.gain_slope, h) << "\n"
        << "thermal_out=" << fmt(thermal.number, h) << "\n"
        << "thermal_out_density=" << fmt(thermal.density, h) << "\n"
        << "n_bar=" << fmt(p.n_bar, h) << "\n"
        << "a=" << fmt(d.a, h) << "\n"
        << "b=" << fmt(d.b, h) << "\n";
    for (const auto& w : thermal.warnings) std::cerr << "warning: " << w << "\n";
    write_text(resolve_output(opts, "analytic.txt"), out.str());
    return kExitOk;
}

int cmd_design(const CommonOpts& opts, std::optional<double> a, std::optional<double> b,
               bool search) {
    std::ostringstream out;
    const bool h = opts.human;
    if (a && b) {
        const auto sol = sbs::design::balance_detuning(*a, *b);
        if (sol.degenerate)
            std::cerr << "warning: degenerate balance, both detunings vanish\n";
        out << "delta_l=" << fmt(sol.delta_l, h) << "\n"
            << "delta_u=" << fmt(sol.delta_u, h) << "\n"
            << "a=" << fmt(sol.intensity_ratio, h) << "\n"
            << "residual=" << fmt(sol.residual, h) << "\n";
        write_text(resolve_output(opts, "design.txt"), out.str());
        return kExitOk;
    }
    const auto cfg = load_config(opts);
    if (search) {
        sbs::design::SearchGrid grid;
        const auto ranked = sbs::design::feasible_design_search(
            cfg.physics.waveguide, grid, cfg.budgets);
        out << "rank,a,b,delta_l,intensity_l,velocity_ratio,GL,thermal_out,bandwidth\n";
        int rank = 0;
        for (const auto& rep : ranked) {
            out << ++rank << ',' << fmt(rep.config.a, h) << ',' << fmt(rep.config.b, h)
                << ',' << fmt(rep.config.lower.detuning_scaled, h) << ','
                << fmt(rep.config.lower.intensity, h) << ','
                << fmt(rep.velocity_ratio, h) << ',' << fmt(rep.gain_times_length, h)
                << ',' << fmt(rep.thermal_out, h) << ',' << fmt(rep.bandwidth, h) << "\n";
        }
        write_text(resolve_output(opts, "design_search.csv"), out.str());
        return kExitOk;
    }
    const auto report =
        sbs::design::feasibility(cfg.physics.waveguide, cfg.physics.pumps, cfg.budgets);
    out << "pass=" << (report.pass ? "yes" : "no") << "\n"
        << "velocity_ratio=" << fmt(report.velocity_ratio, h) << "\n"
        << "GL=" << fmt(report.gain_times_length, h) << "\n"
        << "thermal_out=" << fmt(report.thermal_out, h) << "\n"
        << "bandwidth=" << fmt(report.bandwidth, h) << "\n";
    for (const auto& f : report.flags)
        out << "flag." << f.name << "=" << fmt(f.value, h)
            << " limit=" << fmt(f.limit, h)
            << (f.enforced ? (f.pass ? " pass" : " FAIL") : " info") << "\n";
    write_text(resolve_output(opts, "design.txt"), out.str());
    return kExitOk;
}

int cmd_check(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto report =
        sbs::design::feasibility(cfg.physics.waveguide, cfg.physics.pumps, cfg.budgets);
    for (const auto& f : report.flags)
        std::cout << f.name << "=" << fmt(f.value, opts.human)
                  << " limit=" << fmt(f.limit, opts.human)
                  << (f.enforced ? (f.pass ? " pass" : " FAIL") : " info") << "\n";
    return report.pass ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const CommonOpts& opts, const std::string& mode_name, int mc) {
    const auto cfg = load_config(opts);
    const auto& p = cfg.physics.waveguide;
    sbs::prop::Mode mode = sbs::prop::Mode::adiabatic;
    if (mode_name == "full")
        mode = sbs::prop::Mode::full;
    else if (mode_name != "adiabatic")
        throw sbs::ConfigError("--mode must be full or adiabatic");

    const int trajectories = mc > 0 ? mc : cfg.mc.trajectories;
    const std::uint64_t seed = resolve_seed(opts, cfg.mc);
    const fs::path dest = resolve_output(opts, "simulate.csv");
    std::ostringstream out;
    std::string grid_desc;

    if (trajectories > 0) {
        const double t_obs = cfg.mc.t_obs > 0.0 ? cfg.mc.t_obs : 3.0 / p.gamma;
        const auto grid = sbs::prop::Grid::make(p, cfg.grid.nz, t_obs);
        const auto result = sbs::prop::monte_carlo_density(
            p, cfg.physics.pumps, grid, t_obs, trajectories, seed);
        out << "z,mean_density,std_error\n";
        for (int i = 0; i < grid.nz; ++i)
            out << sbs::format_sci17((i + 1) * grid.dz) << ','
                << sbs::format_sci17(result.mean_density[i]) << ','
                << sbs::format_sci17(result.std_error[i]) << "\n";
        grid_desc = "nz=" + std::to_string(grid.nz) +
                    " nt=" + std::to_string(static_cast<long long>(
                                 std::llround(t_obs / grid.dt)));
    } else {
        if (!cfg.pulse.bandwidth_ok(p.gamma) && mode == sbs::prop::Mode::adiabatic)
            std::cerr << "warning: pulse bandwidth 1/sigma_t exceeds gamma/10; "
                         "adiabatic mode strained\n";
        const auto grid = sbs::prop::Grid::make(
            p, cfg.grid.nz, sbs::config::effective_duration(cfg));
        const auto result =
            sbs::prop::propagate_mean_field(p, cfg.physics.pumps, cfg.pulse, grid, mode);
        out << "t,input_density,output_density,output_re,output_im\n";
        for (std::size_t k = 0; k < result.output_density.size(); ++k)
            out << sbs::format_sci17((static_cast<double>(k) + 1.0) * grid.dt) << ','
                << sbs::format_sci17(result.input_density[k]) << ','
                << sbs::format_sci17(result.output_density[k]) << ','
                << sbs::format_sci17(result.output_field[k].real()) << ','
                << sbs::format_sci17(result.output_field[k].imag()) << "\n";
        std::cerr << "measured_gain=" << sbs::format_sci17(result.measured_gain) << "\n";
        grid_desc = "nz=" + std::to_string(grid.nz) + " nt=" + std::to_string(grid.nt);
    }

    write_text(dest, out.str());
    if (!dest.empty())
        emit_manifest(cfg, dest, seed, grid_desc,
                      trajectories > 0 ? "mc" : mode_name);
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis, double from, double to,
              int points, const std::string& balance) {
    const auto cfg = load_config(opts);
    sbs::sweep::SweepSpec spec;
    spec.axis = sbs::sweep::axis_from_name(axis);
    spec.from = from;
    spec.to = to;
    spec.points = points;
    if (balance == "hold_zero_gain")
        spec.balance = sbs::sweep::BalanceMode::hold_zero_gain;
    else if (balance != "free")
        throw sbs::ConfigError("--balance must be free or hold_zero_gain");

    const auto table = sbs::sweep::sweep(cfg.physics.waveguide, cfg.physics.pumps, spec);
    const fs::path dest = resolve_output(opts, "sweep.csv");
    if (dest.empty()) {
        sbs::sweep::write_csv(table, std::cout);
    } else {
        sbs::sweep::write_csv_file(table, dest);
        const std::uint64_t seed = opts.seed ? *opts.seed : 0;
        emit_manifest(cfg, dest, seed, "closed-form", "analytic");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"Brillouin slow-light design and simulation toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("-c,--config", opts.config_path, "config file (INI)");
        sub->add_option("-o,--output", opts.output_path, "output path (default: stdout)");
        sub->add_option("--set", opts.overrides, "override config key=value")
            ->take_all();
        sub->add_option("--seed", opts.seed, "RNG seed");
        sub->add_flag("--human", opts.human, "round output to 4 significant digits");
        sub->add_flag("-v,--verbose", opts.verbosity, "increase verbosity");
    };

    auto* analytic = app.add_subcommand("analytic", "closed-form response of a config");
    add_common(analytic);

    auto* design = app.add_subcommand("design", "balance solver and feasibility");
    add_common(design);
    std::optional<double> a_opt, b_opt;
    bool search = false;
    design->add_option("--a", a_opt, "intensity ratio I_u/I_l");
    design->add_option("--b", b_opt, "detuning ratio D_u/D_l");
    design->add_flag("--search", search, "grid search for feasible designs");

    auto* simulate = app.add_subcommand("simulate", "space-time integration");
    add_common(simulate);
    std::string mode = "adiabatic";
    int mc = 0;
    simulate->add_option("--mode", mode, "full or adiabatic");
    simulate->add_option("--mc", mc, "Monte Carlo trajectories (0 = mean field)");

    auto* sweep_cmd = app.add_subcommand("sweep", "closed-form parameter sweep to CSV");
    add_common(sweep_cmd);
    std::string axis = "delta_u", balance = "free";
    double from = -10.0, to = 10.0;
    int points = 201;
    sweep_cmd->add_option("--axis", axis, "sweep axis")->required();
    sweep_cmd->add_option("--from", from, "axis start")->required();
    sweep_cmd->add_option("--to", to, "axis end")->required();
    sweep_cmd->add_option("--points", points, "grid points");
    sweep_cmd->add_option("--balance", balance, "free or hold_zero_gain");

    auto* check = app.add_subcommand("check", "exit 0 iff feasibility budgets pass");
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (analytic->parsed()) return cmd_analytic(opts);
        if (design->parsed()) return cmd_design(opts, a_opt, b_opt, search);
        if (simulate->parsed()) return cmd_simulate(opts, mode, mc);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, axis, from, to, points, balance);
        if (check->parsed()) return cmd_check(opts);
    } catch (const sbs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const sbs::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const sbs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
