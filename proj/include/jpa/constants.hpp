#pragma once

// Physical constants (CODATA 2018 / SI exact values). All frequencies in this
// library are ordinary frequencies in Hz, so h*f is an energy.
namespace jpa::constants {

inline constexpr double planck_h = 6.62607015e-34;    // J s
inline constexpr double boltzmann_k = 1.380649e-23;   // J/K

}  // namespace jpa::constants
