#pragma once

// Internal units are millimetres and inverse millimetres. One diopter is 1/m.

namespace sweepfocus {

inline constexpr double kMmPerDiopter = 1e-3; // mm^-1 per diopter

constexpr double diopters_to_inv_mm(double diopters) { return diopters * kMmPerDiopter; }
constexpr double inv_mm_to_diopters(double inv_mm) { return inv_mm * 1000.0; }

inline constexpr double kPi = 3.14159265358979323846;

} // namespace sweepfocus
