#include "sbs/sweep.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sbs/analytics.hpp"
#include "sbs/design.hpp"
#include "sbs/errors.hpp"
#include "sbs/format.hpp"

namespace sbs::sweep {

Axis axis_from_name(const std::string& name) {
    if (name == "delta_u") return Axis::delta_u;
    if (name == "delta_l") return Axis::delta_l;
    if (name == "detuning_ratio") return Axis::detuning_ratio;
    if (name == "intensity_ratio") return Axis::intensity_ratio;
    if (name == "signal_frequency_offset") return Axis::signal_frequency_offset;
    throw ConfigError("unknown sweep axis '" + name + "'");
}

std::string axis_name(Axis axis) {
    switch (axis) {
    case Axis::delta_u: return "delta_u";
    case Axis::delta_l: return "delta_l";
    case Axis::detuning_ratio: return "detuning_ratio";
    case Axis::intensity_ratio: return "intensity_ratio";
    case Axis::signal_frequency_offset: return "signal_frequency_offset";
    }
    return "?";
}

namespace {

bool is_ratio_axis(Axis axis) {
    return axis == Axis::detuning_ratio || axis == Axis::intensity_ratio;
}

Row make_row(const WaveguideParams& p, const DualPumpConfig& cfg,
             const std::string& name, double x, std::string status) {
    Row row;
    row.axis_name = name;
    row.axis_value = x;
    row.delta_u = cfg.upper.detuning_scaled;
    row.delta_l = cfg.lower.detuning_scaled;
    row.intensity_u = cfg.upper.intensity;
    row.intensity_l = cfg.lower.intensity;
    try {
        const auto r = analytics::dual_response(p, cfg);
        row.gl = r.gain_per_length * p.length;
        row.kappal = r.kappa * p.length;
        row.velocity_ratio = r.velocity_ratio;
        row.gain_slope = r.gain_slope;
    } catch (const NumericalError&) {
        const auto gu = analytics::gain_single(p, cfg.upper);
        const auto gl = analytics::gain_single(p, cfg.lower);
        row.gl = (gu - gl) * p.length;
        row.kappal = (analytics::wavenumber_shift_single(p, cfg.upper) +
                      analytics::wavenumber_shift_single(p, cfg.lower)) * p.length;
        row.velocity_ratio = std::numeric_limits<double>::quiet_NaN();
        row.gain_slope = std::numeric_limits<double>::quiet_NaN();
        if (status == "ok") status = "unstable";
    }
    row.thermal_out = analytics::thermal_out(p, cfg);
    row.status = std::move(status);
    return row;
}

Row infeasible_row(const std::string& name, double x, const std::string& status) {
    Row row;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.axis_name = name;
    row.axis_value = x;
    row.delta_u = row.delta_l = row.intensity_u = row.intensity_l = nan;
    row.gl = row.kappal = row.velocity_ratio = row.gain_slope = row.thermal_out = nan;
    row.status = status;
    return row;
}

} // namespace

Table sweep(const WaveguideParams& p, const DualPumpConfig& base, const SweepSpec& spec) {
    if (!(spec.from < spec.to))
        throw ConfigError("sweep range is empty: require from < to");
    if (spec.points < 2)
        throw ConfigError("sweep needs at least 2 points");
    if (spec.balance == BalanceMode::hold_zero_gain && !is_ratio_axis(spec.axis))
        throw ConfigError("hold_zero_gain only valid for ratio axes");

    const std::string name = axis_name(spec.axis);
    Table table;
    table.reserve(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        const double x =
            spec.from + (spec.to - spec.from) * static_cast<double>(i) / (spec.points - 1);
        DualPumpConfig cfg = base;
        std::string status = "ok";
        switch (spec.axis) {
        case Axis::delta_u:
            cfg.upper.detuning_scaled = x;
            break;
        case Axis::delta_l:
            cfg.lower.detuning_scaled = x;
            break;
        case Axis::detuning_ratio:
            if (spec.balance == BalanceMode::hold_zero_gain) {
                try {
                    const auto sol = design::balance_detuning(base.a, x);
                    if (sol.degenerate) status = "degenerate";
                    cfg = design::config_from_balance(sol, base.lower.intensity);
                } catch (const InfeasibleError&) {
                    table.push_back(infeasible_row(name, x, "infeasible"));
                    continue;
                }
            } else {
                cfg.upper.detuning_scaled = x * base.lower.detuning_scaled;
            }
            break;
        case Axis::intensity_ratio:
            if (spec.balance == BalanceMode::hold_zero_gain) {
                try {
                    const auto sol = design::balance_detuning(x, base.b);
                    if (sol.degenerate) status = "degenerate";
                    cfg = design::config_from_balance(sol, base.lower.intensity);
                } catch (const InfeasibleError&) {
                    table.push_back(infeasible_row(name, x, "infeasible"));
                    continue;
                }
            } else {
                cfg.upper.intensity = x * base.lower.intensity;
            }
            break;
        case Axis::signal_frequency_offset:
            cfg = analytics::shift_signal_frequency(p, base, x);
            break;
        }
        cfg.a = cfg.lower.intensity > 0.0 ? cfg.upper.intensity / cfg.lower.intensity : 0.0;
        cfg.b = cfg.lower.detuning_scaled != 0.0
                    ? cfg.upper.detuning_scaled / cfg.lower.detuning_scaled
                    : 0.0;
        table.push_back(make_row(p, cfg, name, x, std::move(status)));
    }
    return table;
}

std::size_t write_csv(const Table& table, std::ostream& out) {
    if (table.empty())
        throw ConfigError("refusing to write an empty sweep table");
    std::string buf;
    buf += "axis_name,axis_value,delta_u,delta_l,intensity_u,intensity_l,"
           "GL,kappaL,velocity_ratio,gain_slope,thermal_out,status\n";
    for (const Row& r : table) {
        buf += r.axis_name;
        for (double v : {r.axis_value, r.delta_u, r.delta_l, r.intensity_u,
                         r.intensity_l, r.gl, r.kappal, r.velocity_ratio,
                         r.gain_slope, r.thermal_out}) {
            buf += ',';
            buf += format_sci17(v);
        }
        buf += ',';
        buf += r.status;
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    return buf.size();
}

std::size_t write_csv_file(const Table& table, const std::filesystem::path& dest) {
    std::ofstream out(dest, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open '" + dest.string() + "' for writing");
    const auto n = write_csv(table, out);
    if (!out)
        throw ConfigError("I/O failure writing '" + dest.string() + "'");
    return n;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fnv1a_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot hash missing output file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

std::string tool_version() { return "brislow 0.1.0"; }

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dest) {
    nlohmann::json j;
    nlohmann::json echo;
    for (const auto& [k, v] : manifest.config_echo) echo[k] = v;
    j["config"] = echo;
    j["content_hash"] = manifest.content_hash;
    j["grid"] = manifest.grid;
    j["seed"] = manifest.seed;
    j["solver_mode"] = manifest.solver_mode;
    j["timestamp"] = manifest.timestamp;
    j["tool_version"] = manifest.tool_version;
    std::ofstream out(dest, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open '" + dest.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out)
        throw ConfigError("I/O failure writing '" + dest.string() + "'");
}

} // namespace sbs::sweep
