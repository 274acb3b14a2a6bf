#pragma once

#include <stdexcept>
#include <string>

namespace sbs {

/// Bad or inconsistent user input (config files, overrides, CLI values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested design has no solution (branch condition violated, empty
/// feasible set, zero bandwidth).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: non-finite fields, non-convergence.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sbs
