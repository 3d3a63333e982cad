#pragma once

// Apparent magnification of objects viewed through the powered tunable lens.

#include <optional>

namespace sweepfocus {

/// Signed distance from the lens to the image of an object at
/// `object_distance` (thin-lens formula 1/d_o + 1/d_i = P). Negative values
/// are virtual images. Throws SingularConfiguration when d_o P = 1.
double image_distance(double object_distance, double etl_power);

struct ScalingResult {
    double scale = 1.0;          ///< s = tan u_E / tan u_{E=0}
    double visual_angle = 0.0;   ///< u_E for a unit object height (rad)
    double visual_angle_unpowered = 0.0;
    /// Image distance and height for a unit object height; empty when the
    /// object sits in the focal plane and the image is at infinity.
    std::optional<double> image_distance;
    std::optional<double> image_height;
};

/// s = (d_oE + d_Ee) / (d_oE + d_Ee - d_oE d_Ee P_E).
/// Throws SingularConfiguration when the denominator vanishes.
ScalingResult scaling_factor(double object_distance, double vertex_distance, double etl_power);

} // namespace sweepfocus
