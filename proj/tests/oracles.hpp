#pragma once

// Test-only reference implementations. None of these reuse library code
// paths: they trace rays step by step, scan exhaustively or bisect in
// extended precision.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>

#include "sweepfocus/optics.hpp"
#include "sweepfocus/waveform_db.hpp"

namespace oracle {

/// Marginal-ray blur diameter by explicit surface-to-surface propagation:
/// the launch angle is found from a unit probe ray, then the ray is stepped
/// through both lenses to the retina.
long double traced_blur(long double pupil, long double d_er, long double d_Ee, long double P_E,
                        long double P_e, long double d);

/// Signed retinal ray height / (pupil / 2), from the same step-by-step trace.
long double traced_defocus(long double d_er, long double d_Ee, long double P_E, long double P_e,
                           long double d);

/// Distance where traced_defocus crosses `level`, found by bisection in
/// extended precision over (0, 1e12] mm. Empty if there is no crossing.
std::optional<double> bisect_defocus_level(long double d_er, long double d_Ee, long double P_E,
                                           long double P_e, long double level);

/// Far border oracle: relaxed eye, blur equals the acceptable CoC.
std::optional<double> far_border(const sweepfocus::EyeModel& eye, double d_Ee, double P_E);

/// Index of the narrowest covering entry, by linear scan.
std::optional<std::size_t> scan_select(const sweepfocus::WaveformDb& db, double lo, double hi);

/// Apparent scale from thin-lens imaging followed by the visual angle of the
/// image seen from the eye.
long double chained_scale(long double d, long double d_Ee, long double P);

/// k-th DFT coefficient normalized to a real amplitude (2/N |X_k|) with phase.
std::complex<double> harmonic(std::span<const double> samples, int k);

/// Number of sign changes of (x - level) around the cyclic sequence.
std::size_t cyclic_sign_changes(std::span<const double> samples, double level);

} // namespace oracle
