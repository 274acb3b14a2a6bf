#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbs/params.hpp"

namespace sbs::sweep {

enum class Axis { delta_u, delta_l, detuning_ratio, intensity_ratio, signal_frequency_offset };
enum class BalanceMode { free, hold_zero_gain };

Axis axis_from_name(const std::string& name);
std::string axis_name(Axis axis);

struct SweepSpec {
    Axis axis = Axis::delta_u;
    double from = 0.0;
    double to = 0.0;
    int points = 2;
    BalanceMode balance = BalanceMode::free;
};

/// One evaluated grid point. status is "ok", "infeasible" (balance has no
/// solution there; numeric columns are NaN), "degenerate", or "unstable"
/// (superluminal velocity denominator).
struct Row {
    std::string axis_name;
    double axis_value = 0.0;
    double delta_u = 0.0;
    double delta_l = 0.0;
    double intensity_u = 0.0;
    double intensity_l = 0.0;
    double gl = 0.0;
    double kappal = 0.0;
    double velocity_ratio = 0.0;
    double gain_slope = 0.0;
    double thermal_out = 0.0;
    std::string status = "ok";
};

using Table = std::vector<Row>;

/// Evaluate the closed-form response along the axis. hold_zero_gain re-solves
/// the balance condition at every point and is valid only for ratio axes.
Table sweep(const WaveguideParams& p, const DualPumpConfig& base, const SweepSpec& spec);

/// RFC-4180-style CSV: header row, scientific notation with 17 significant
/// digits, LF line endings, locale independent. Returns bytes written.
std::size_t write_csv(const Table& table, std::ostream& out);
std::size_t write_csv_file(const Table& table, const std::filesystem::path& dest);

struct RunManifest {
    ConfigTree config_echo;
    std::uint64_t seed = 0;
    std::string grid;
    std::string solver_mode;
    std::string tool_version;
    std::string timestamp;
    std::string content_hash; // fnv1a-64 of the output file, hex
};

/// Canonical JSON (keys sorted, stable float formatting) next to the output.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dest);

/// FNV-1a 64-bit hash of a file's bytes, lowercase hex. Throws ConfigError
/// when the file cannot be read.
std::string fnv1a_file_hex(const std::filesystem::path& path);
std::string fnv1a_hex(const std::string& bytes);

std::string tool_version();

} // namespace sbs::sweep
