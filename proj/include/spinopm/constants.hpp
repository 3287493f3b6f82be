#pragma once

// CODATA 2018, SI units.
namespace spinopm::constants {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kBohrMagneton = 9.2740100783e-24;   // J/T
inline constexpr double kHbar = 1.054571817e-34;            // J s
inline constexpr double kElectronG = 2.00231930436256;      // |g_s|
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kElectronRadius = 2.8179403262e-15; // m
inline constexpr double kGauss = 1e-4;                      // T

}  // namespace spinopm::constants
