#pragma once

#include <numbers>

namespace tadpole::constants {

inline constexpr double pi = std::numbers::pi;

// SI 2019 exact values.
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double boltzmann = 1.380649e-23;     // J/K
inline constexpr double speed_of_light = 299792458.0; // m/s

// CODATA 2018; eps0 is tied to mu0 so that mu0*eps0*c^2 == 1.
inline constexpr double mu0 = 1.25663706212e-6; // H/m
inline constexpr double eps0 = 1.0 / (mu0 * speed_of_light * speed_of_light);

}  // namespace tadpole::constants
