#pragma once

// Simulated retinal view of projector-lit planar objects seen through the
// sweeping tunable lens.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sweepfocus/etl.hpp"
#include "sweepfocus/image.hpp"
#include "sweepfocus/optics.hpp"
#include "sweepfocus/schedule.hpp"

namespace sweepfocus {

/// A planar textured object. Texture and masks share one texel grid; the
/// masks are the projector illumination patterns falling on this object,
/// keyed by mask id.
struct Layer {
    std::string name;
    Image texture;                    ///< reflectance, linear light
    double distance = 0.0;            ///< d_oE (mm)
    double pitch = 1.0;               ///< mm per texel at the object plane
    Vec2 axis_texel;                  ///< texel on the optical axis
    RegionLabel label = RegionLabel::Focus;
    std::map<std::string, Image> masks;
};

/// Layers viewed on a perceived-image raster; texels map to perceived
/// pixels through visual angle at pixels_per_radian.
struct Scene {
    int width = 0;
    int height = 0;
    Vec2 optical_center;
    double pixels_per_radian = 24.0 / 0.0084;
    double ambient = 0.0;
    std::vector<Layer> layers; ///< sorted by distance

    std::size_t layer_index(const std::string& name) const;
    void validate() const;
};

struct GazeState {
    std::size_t layer = 0;
    double eye_power = 0.0; ///< P_e (mm^-1)
    bool clamped = false;   ///< conjugate power fell outside the accommodation range
};

/// Eye power that focuses the gazed layer with the lens unpowered, clamped
/// to the accommodation range.
GazeState accommodate(const Scene& scene, std::size_t layer, const EyeModel& eye, double vertex_distance);

/// Angular blur-disc diameter in perceived pixels: (D_r / d_er) * pixels_per_radian.
double psf_diameter_px(const OpticalStack& stack, double object_distance, double pixels_per_radian);

struct RenderOptions {
    EyeModel eye = EyeModel::standard();
    double vertex_distance = 15.0;
    /// Average k power samples across each projector frame instead of using the slot's nominal power.
    bool integrate_within_frame = true;
    int subsamples = 8;
    bool apply_psf = true;
    /// Scale so that a target lit for its full slot set reproduces the texture radiance.
    bool auto_exposure = true;
};

struct LayerContribution {
    std::string layer;
    double mean_power = 0.0;       ///< mm^-1, averaged over subsamples
    double blur_diameter = 0.0;    ///< D_r (mm), averaged over subsamples
    double psf_px = 0.0;           ///< averaged over subsamples
    double scale = 1.0;            ///< averaged over subsamples
    bool lit = false;              ///< mask and texture overlap
};

struct SlotContribution {
    int slot_id = 0;
    std::string mask_id;
    double nominal_power = 0.0;
    double weight = 0.0; ///< slot duration / period, times the exposure gain
    std::vector<double> powers;
    std::vector<LayerContribution> layers;
};

struct RenderedView {
    Image image;
    double exposure_gain = 1.0;
    std::vector<SlotContribution> slots;
};

/// Composites every slot: each layer is lit by its mask, magnified by the
/// lens about the optical centre, blurred by a disc of the retinal blur
/// diameter and accumulated with weight duration/period.
/// `waveform` is required when integrating within frames.
/// Throws ValidationError for unresolved mask ids.
RenderedView render(const Scene& scene, const IlluminationSchedule& schedule,
                    const OutputWaveform* waveform, const GazeState& gaze, const RenderOptions& options);

} // namespace sweepfocus
