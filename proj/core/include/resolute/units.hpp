#pragma once

#include "resolute/math.hpp"

namespace resolute {

// Internal canonical units are seconds and angular frequency (rad/s).
// File and CLI interfaces use microseconds, kHz (cycles) and Gauss; the
// conversion happens once, at the boundary.

inline constexpr double us_to_s(double us) { return us * 1e-6; }
inline constexpr double s_to_us(double s) { return s * 1e6; }

inline constexpr double khz_to_omega(double f_khz) { return two_pi * f_khz * 1e3; }
inline constexpr double omega_to_khz(double omega) { return omega / (two_pi * 1e3); }

inline constexpr double hz_to_omega(double f_hz) { return two_pi * f_hz; }
inline constexpr double omega_to_hz(double omega) { return omega / two_pi; }

/// 13C nuclear gyromagnetic ratio, cycles: 1.0705 kHz/G.
inline constexpr double gamma_c13_hz_per_gauss = 1070.5;

/// Electron gyromagnetic ratio, cycles: 2.8024 MHz/G.
inline constexpr double gamma_electron_hz_per_gauss = 2.8024e6;

}  // namespace resolute
