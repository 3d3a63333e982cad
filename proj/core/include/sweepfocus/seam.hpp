#pragma once

// Seams between regions lit at zero lens power and regions lit at a higher
// power, which the lens magnifies about the optical centre, and the
// complementary feathering that hides them.

#include <cstddef>

#include "sweepfocus/image.hpp"
#include "sweepfocus/schedule.hpp"

namespace sweepfocus {

/// Weights over the projector raster. For a blur-labeled mask the weights
/// mark the region lit at the high power; a focus-labeled mask marks the
/// complement.
struct RegionMask {
    Image weights;
    RegionLabel label = RegionLabel::Blur;
    Vec2 optical_center;
    double pixels_per_mm = 1.0;

    /// Blur-region membership in [0, 1] regardless of label.
    Image blur_region() const;
};

struct SeamRegion {
    Image gap;     ///< 1 where the magnified blur region vacates pixels (dark seam)
    Image overlap; ///< 1 where it spills over the focus region (bright seam)

    std::size_t gap_pixels() const { return gap.count_nonzero(); }
    std::size_t overlap_pixels() const { return overlap.count_nonzero(); }
    std::size_t pixels() const { return gap_pixels() + overlap_pixels(); }
};

/// Pixels in the symmetric difference of the blur region and its image
/// under magnification by `scale` (>= 1) about the optical centre.
SeamRegion seam_region(const RegionMask& mask, double scale);

/// Projector images for the two illumination instants plus the apparent
/// (magnified) contribution of the high-power one. `focus` + `blur_apparent`
/// equals 1 at every pixel.
struct BlendPair {
    Image focus;            ///< lit at zero power, seen unmagnified
    Image blur_projector;   ///< lit at the high power, as sent to the projector
    Image blur_apparent;    ///< blur_projector as seen through the lens
    Vec2 optical_center;
    double scale = 1.0;
};

/// Plain binary masks without seam treatment.
BlendPair binary_pair(const RegionMask& mask, double scale);

/// Linear radial ramps across each seam band: along the ray from the
/// optical centre the apparent high-power weight rises from 0 on the
/// unscaled side of the band to 1 on the scaled side, and the zero-power
/// weight is its complement.
BlendPair feather(const RegionMask& mask, double scale);

} // namespace sweepfocus
