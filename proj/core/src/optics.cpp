#include "sweepfocus/optics.hpp"

#include <cmath>
#include <sstream>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

TransferMatrix free_space(double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        std::ostringstream msg;
        msg << "free_space: distance must be finite and non-negative, got " << d;
        throw DomainError(msg.str());
    }
    return {1.0, d, 0.0, 1.0};
}

TransferMatrix thin_lens(double p) {
    if (!std::isfinite(p)) {
        throw DomainError("thin_lens: optical power must be finite");
    }
    return {1.0, 0.0, -p, 1.0};
}

TransferMatrix compose(const TransferMatrix& outer, const TransferMatrix& inner) {
    return {
        outer.a * inner.a + outer.b * inner.c,
        outer.a * inner.b + outer.b * inner.d,
        outer.c * inner.a + outer.d * inner.c,
        outer.c * inner.b + outer.d * inner.d,
    };
}

EyeModel EyeModel::standard() {
    EyeModel eye;
    eye.pupil_diameter = 4.0;
    eye.lens_retina_distance = 1000.0 / 60;
    eye.far_power = 1.0 / eye.lens_retina_distance;
    eye.near_power = eye.far_power + diopters_to_inv_mm(11.0);
    eye.acceptable_coc = eye.lens_retina_distance * std::tan(kPi / (180.0 * 60.0));
    return eye;
}

void EyeModel::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(pupil_diameter) || !positive(lens_retina_distance) || !positive(far_power) ||
        !positive(near_power)) {
        throw ValidationError("eye model: pupil diameter, retina distance and powers must be positive");
    }
    if (!(near_power > far_power)) {
        throw ValidationError("eye model: near-point power must exceed far-point power");
    }
    if (!std::isfinite(acceptable_coc) || acceptable_coc < 0.0 || !(acceptable_coc < pupil_diameter)) {
        throw ValidationError("eye model: acceptable CoC must lie in [0, pupil diameter)");
    }
}

void OpticalStack::validate() const {
    eye.validate();
    if (!(vertex_distance > 0.0) || !std::isfinite(vertex_distance)) {
        throw ValidationError("optical stack: vertex distance must be positive");
    }
    if (!(etl_power >= 0.0) || !std::isfinite(etl_power)) {
        throw ValidationError("optical stack: tunable-lens power must be finite and >= 0");
    }
    if (!(eye_power >= eye.far_power && eye_power <= eye.near_power)) {
        throw ValidationError("optical stack: eye power outside the accommodation range");
    }
}

TransferMatrix object_to_retina(const OpticalStack& stack, double object_distance) {
    TransferMatrix m = free_space(object_distance);
    m = compose(thin_lens(stack.etl_power), m);
    m = compose(free_space(stack.vertex_distance), m);
    m = compose(thin_lens(stack.eye_power), m);
    m = compose(free_space(stack.eye.lens_retina_distance), m);
    return m;
}

namespace {

// d_oE + d_Ee - d_oE d_Ee P_E: height gained per unit object angle at the eye.
double pupil_lever(const OpticalStack& stack, double object_distance) {
    if (!(object_distance > 0.0) || !std::isfinite(object_distance)) {
        throw DomainError("object distance must be positive and finite");
    }
    const double lever = object_distance + stack.vertex_distance -
                         object_distance * stack.vertex_distance * stack.etl_power;
    const double scale = object_distance + stack.vertex_distance;
    if (std::abs(lever) <= 1e-12 * scale) {
        throw SingularConfiguration("tunable lens images the pupil onto the object plane");
    }
    return lever;
}

} // namespace

MarginalRayTrace marginal_ray(const OpticalStack& stack, double object_distance) {
    const double lever = pupil_lever(stack, object_distance);

    MarginalRayTrace trace;
    trace.u_object = stack.eye.pupil_diameter / (2.0 * lever);

    RayState ray{0.0, trace.u_object};
    ray = free_space(object_distance).apply(ray);
    ray = thin_lens(stack.etl_power).apply(ray);
    ray = free_space(stack.vertex_distance).apply(ray);
    trace.u_eye = ray.u;
    ray = thin_lens(stack.eye_power).apply(ray);
    ray = free_space(stack.eye.lens_retina_distance).apply(ray);
    trace.u_retina = ray.u;
    trace.blur_diameter = 2.0 * std::abs(ray.x);
    return trace;
}

double signed_defocus(const OpticalStack& stack, double object_distance) {
    const double lever = pupil_lever(stack, object_distance);
    const double d_er = stack.eye.lens_retina_distance;
    return 1.0 - d_er * stack.eye_power + d_er * (1.0 - object_distance * stack.etl_power) / lever;
}

double blur_circle_diameter(const OpticalStack& stack, double object_distance) {
    return stack.eye.pupil_diameter * std::abs(signed_defocus(stack, object_distance));
}

} // namespace sweepfocus
