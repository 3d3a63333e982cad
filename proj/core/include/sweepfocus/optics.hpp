#pragma once

// Paraxial ray-transfer-matrix algebra and the blur-circle model of a point
// seen by an eye behind a tunable lens.
//
// Geometry along the optical axis (all distances in mm, powers in mm^-1):
//
//   object --d_oE-- tunable lens (P_E) --d_Ee-- eye lens (P_e) --d_er-- retina
//
// Rays are (x, u) column vectors; a transfer matrix maps the state on its
// input plane to the state on its output plane.

#include <cmath>

#include "sweepfocus/units.hpp"

namespace sweepfocus {

struct RayState {
    double x = 0.0; ///< lateral offset from the axis (mm)
    double u = 0.0; ///< paraxial angle (rad)
};

struct TransferMatrix {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    static constexpr TransferMatrix identity() { return {}; }

    double determinant() const { return a * d - b * c; }

    RayState apply(const RayState& in) const { return {a * in.x + b * in.u, c * in.x + d * in.u}; }

    bool operator==(const TransferMatrix&) const = default;
};

/// Propagation through `d` mm of free space. Throws DomainError for d < 0.
TransferMatrix free_space(double d);

/// Refraction by a thin lens of power `p` (mm^-1). Throws DomainError if p is not finite.
TransferMatrix thin_lens(double p);

/// Product outer * inner: `inner` acts on the ray first.
TransferMatrix compose(const TransferMatrix& outer, const TransferMatrix& inner);

/// Reduced eye: one thin lens followed by the retina.
struct EyeModel {
    double pupil_diameter = 4.0;                ///< D_e (mm)
    double lens_retina_distance = 1000.0 / 60;  ///< d_er (mm)
    double far_power = 60.0 / 1000;             ///< P_e^f (mm^-1), relaxed eye
    double near_power = 71.0 / 1000;            ///< P_e^n (mm^-1), fully accommodated
    double acceptable_coc = (1000.0 / 60) * std::tan(kPi / (180.0 * 60.0)); ///< D_r^a (mm)

    /// Defaults: 60 D relaxed eye focused at infinity, 11 D accommodation
    /// amplitude, 4 mm pupil, acceptable CoC subtending one arc-minute.
    static EyeModel standard();

    /// Throws ValidationError when the invariants do not hold.
    void validate() const;
};

/// One viewing configuration: eye plus tunable lens in front of it.
struct OpticalStack {
    EyeModel eye = EyeModel::standard();
    double vertex_distance = 15.0; ///< d_Ee (mm)
    double etl_power = 0.0;        ///< P_E (mm^-1), >= 0
    double eye_power = 0.06;       ///< P_e (mm^-1), within [far_power, near_power]

    void validate() const;
};

struct MarginalRayTrace {
    double u_object = 0.0; ///< u_o (rad)
    double u_eye = 0.0;    ///< u_e (rad)
    double u_retina = 0.0; ///< u_r (rad)
    double blur_diameter = 0.0; ///< D_r (mm)
};

/// Matrix chain from the object plane to the retina:
/// T(d_er) R(P_e) T(d_Ee) R(P_E) T(d_oE).
TransferMatrix object_to_retina(const OpticalStack& stack, double object_distance);

/// Traces the ray from an on-axis object point that grazes the pupil edge.
/// Throws DomainError for object_distance <= 0 and SingularConfiguration when
/// the tunable lens images the pupil onto the object.
MarginalRayTrace marginal_ray(const OpticalStack& stack, double object_distance);

/// Closed-form blur-circle diameter on the retina (mm):
///   D_r = D_e |1 - d_er P_e + d_er (1 - d_oE P_E) / (d_oE + d_Ee - d_oE d_Ee P_E)|
double blur_circle_diameter(const OpticalStack& stack, double object_distance);

/// The signed quantity inside the absolute value of blur_circle_diameter.
/// Strictly decreasing in object_distance; zero at the conjugate distance.
double signed_defocus(const OpticalStack& stack, double object_distance);

} // namespace sweepfocus
