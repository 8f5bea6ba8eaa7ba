#pragma once

namespace matterwave::constants {

// CODATA 2018 values, SI.
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double electron_mass = 9.1093837015e-31; // kg
inline constexpr double boltzmann = 1.380649e-23;         // J / K
inline constexpr double electron_volt = 1.602176634e-19;  // J

inline constexpr double pi = 3.14159265358979323846;

} // namespace matterwave::constants
