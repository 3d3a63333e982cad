#pragma once

// Depth-of-field borders and the blur range of an eye behind a tunable lens.

#include <optional>

#include "sweepfocus/optics.hpp"

namespace sweepfocus {

/// Distances (mm from the tunable lens) bounding acceptable focus for one
/// eye power. An empty optional means the depth of field extends past
/// infinity on that side.
struct DofBorders {
    std::optional<double> far;  ///< d_oE^{a+}: beyond it the CoC exceeds D_r^a
    std::optional<double> near; ///< d_oE^{a-}: closer than it the CoC exceeds D_r^a
};

/// Closed-form DOF borders. The closed form
///
///   d(sigma) = (D_e K + sigma d_Ee D_r^a) /
///              (D_e (P_E K - d_er P_e + 1) + sigma D_r^a (d_Ee P_E - 1)),
///   K = d_Ee d_er P_e - d_Ee - d_er,
///
/// solves signed_defocus(d) = sigma D_r^a / D_e. signed_defocus decreases
/// with distance, so sigma = -1 is the far border and sigma = +1 the near one.
DofBorders dof_borders(const EyeModel& eye, double vertex_distance, double etl_power,
                       double eye_power);

/// One branch of the closed form above, or nullopt when its denominator
/// vanishes or the solution is not a positive distance.
std::optional<double> dof_border_branch(const EyeModel& eye, double vertex_distance,
                                        double etl_power, double eye_power, int sigma);

struct BlurBorders {
    /// Objects closer than this are blurred for every accommodation state.
    std::optional<double> near_border;
    /// Objects farther than this are blurred for every accommodation state.
    /// Empty when the lens power cannot blur anything.
    std::optional<double> far_border;

    bool can_blur() const { return far_border.has_value(); }
    /// True if an object at `distance` is guaranteed to appear blurred.
    bool blurs(double distance) const;
};

/// Near border at full accommodation, far border with the relaxed eye.
BlurBorders blur_borders(const EyeModel& eye, double vertex_distance, double etl_power);

inline constexpr double kMinBlurPowerLo = 1e-6;  // mm^-1
inline constexpr double kMinBlurPowerHi = 0.012; // mm^-1
inline constexpr double kMinPlanningDistance = 80.0; // mm

/// Smallest tunable-lens power whose far border is at or before `distance`.
/// Solved by bisection on the far border over [1e-6, 0.012] mm^-1.
/// Throws DomainError for distances below 80 mm or outside the bracket.
double min_blur_power(const EyeModel& eye, double vertex_distance, double distance);

} // namespace sweepfocus
