#include "sweepfocus/scaling.hpp"

#include <cmath>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

double image_distance(double object_distance, double etl_power) {
    if (!(object_distance > 0.0)) throw DomainError("image_distance: object distance must be positive");
    const double k = object_distance * etl_power - 1.0;
    if (std::abs(k) <= 1e-12) {
        throw SingularConfiguration("object lies in the focal plane of the lens; the image is at infinity");
    }
    return object_distance / k;
}

ScalingResult scaling_factor(double object_distance, double vertex_distance, double etl_power) {
    if (!(object_distance > 0.0) || !(vertex_distance > 0.0)) {
        throw DomainError("scaling_factor: distances must be positive");
    }
    const double unpowered = object_distance + vertex_distance;
    const double powered = unpowered - object_distance * vertex_distance * etl_power;
    if (std::abs(powered) <= 1e-12 * unpowered) {
        throw SingularConfiguration("scaling_factor: lens images the object onto the eye");
    }
    ScalingResult r;
    r.scale = unpowered / powered;
    r.visual_angle = std::atan(1.0 / powered);
    r.visual_angle_unpowered = std::atan(1.0 / unpowered);
    const double k = object_distance * etl_power - 1.0;
    if (std::abs(k) > 1e-12) {
        r.image_distance = object_distance / k;
        r.image_height = 1.0 / k;
    }
    return r;
}

} // namespace sweepfocus
