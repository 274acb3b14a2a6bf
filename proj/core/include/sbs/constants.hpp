#pragma once

namespace sbs::constants {

// CODATA 2018, 9 significant digits.
inline constexpr double hbar = 1.05457182e-34;        // J s
inline constexpr double k_boltzmann = 1.38064900e-23; // J/K

} // namespace sbs::constants
