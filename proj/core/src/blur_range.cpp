#include "sweepfocus/blur_range.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

std::optional<double> dof_border_branch(const EyeModel& eye, double vertex_distance,
                                        double etl_power, double eye_power, int sigma) {
    const double d_ee = vertex_distance;
    const double d_er = eye.lens_retina_distance;
    const double k = d_ee * d_er * eye_power - d_ee - d_er;
    const double s = sigma >= 0 ? 1.0 : -1.0;

    const double num = eye.pupil_diameter * k + s * d_ee * eye.acceptable_coc;
    const double den = eye.pupil_diameter * (etl_power * k - d_er * eye_power + 1.0) +
                       s * eye.acceptable_coc * (d_ee * etl_power - 1.0);
    if (den == 0.0 || !std::isfinite(num) || !std::isfinite(den)) return std::nullopt;
    const double d = num / den;
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    return d;
}

DofBorders dof_borders(const EyeModel& eye, double vertex_distance, double etl_power,
                       double eye_power) {
    if (!std::isfinite(vertex_distance) || !std::isfinite(etl_power) || !std::isfinite(eye_power)) {
        throw DomainError("dof_borders: non-finite input");
    }
    if (etl_power < 0.0) throw DomainError("dof_borders: tunable-lens power must be >= 0");
    return {dof_border_branch(eye, vertex_distance, etl_power, eye_power, -1),
            dof_border_branch(eye, vertex_distance, etl_power, eye_power, +1)};
}

bool BlurBorders::blurs(double distance) const {
    if (far_border && distance > *far_border) return true;
    if (near_border && distance < *near_border) return true;
    return false;
}

BlurBorders blur_borders(const EyeModel& eye, double vertex_distance, double etl_power) {
    BlurBorders out;
    out.near_border = dof_borders(eye, vertex_distance, etl_power, eye.near_power).near;
    out.far_border = dof_borders(eye, vertex_distance, etl_power, eye.far_power).far;
    return out;
}

double min_blur_power(const EyeModel& eye, double vertex_distance, double distance) {
    if (!(distance >= kMinPlanningDistance) || !std::isfinite(distance)) {
        std::ostringstream msg;
        msg << "min_blur_power: distance " << distance << " mm is below the " << kMinPlanningDistance
            << " mm planning regime";
        throw DomainError(msg.str());
    }
    // Positive when the far border still lies beyond `distance` (not yet blurred).
    const auto excess = [&](double power) {
        const auto far = blur_borders(eye, vertex_distance, power).far_border;
        if (!far) return std::numeric_limits<double>::infinity();
        return *far - distance;
    };
    if (!(excess(kMinBlurPowerLo) > 0.0) || !(excess(kMinBlurPowerHi) <= 0.0)) {
        std::ostringstream msg;
        msg << "min_blur_power: no power in [" << kMinBlurPowerLo << ", " << kMinBlurPowerHi
            << "] mm^-1 places the far border at " << distance << " mm";
        throw DomainError(msg.str());
    }
    double lo = kMinBlurPowerLo;
    double hi = kMinBlurPowerHi;
    // Keep hi on the blurred side so the returned power satisfies far <= distance.
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (excess(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

} // namespace sweepfocus
