#pragma once

// Declarative scene description: planar objects at distances, their
// textures, focus/blur labels and the gazed object.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sweepfocus/image.hpp"
#include "sweepfocus/render.hpp"
#include "sweepfocus/schedule.hpp"

namespace sweepfocus::app {

/// Blur sub-region of a layer in texel coordinates. Everything outside it
/// keeps the focus label.
struct BlurRegion {
    enum class Shape { Disc, Rect } shape = Shape::Disc;
    Vec2 center;        ///< disc
    double radius = 0;  ///< disc
    Vec2 min, max;      ///< rect corners, inclusive texel bounds
    bool invert = false;

    Image rasterize(int width, int height) const;
};

struct SceneLayerSpec {
    std::string name;
    double distance = 0.0;   ///< mm
    RegionLabel label = RegionLabel::Focus;
    double pitch = 1.0;      ///< mm per texel
    Image texture;
    Vec2 axis_texel;
    std::optional<BlurRegion> blur_region;

    /// Label used for planning: any blur region makes the layer a blur target.
    RegionLabel plan_label() const;
};

struct SceneFile {
    int width = 512;
    int height = 384;
    Vec2 optical_center;
    std::optional<double> pixels_per_radian; ///< overrides the config
    double ambient = 0.0;
    std::vector<SceneLayerSpec> layers; ///< sorted by distance on load
    std::string gaze;

    std::vector<PlanObject> plan_objects() const;
    /// Scene without masks; the caller attaches them.
    Scene to_scene(double default_pixels_per_radian) const;
};

/// {
///   "version": 1,
///   "canvas": { "width": 512, "height": 384 },
///   "optical_center": [x, y],            // default: canvas centre
///   "pixels_per_radian": 2857.14,        // optional
///   "ambient": 0.0,
///   "gaze": "A",
///   "layers": [ {
///     "name": "A", "distance_mm": 250, "label": "focus" | "blur", "pitch_mm": 0.16,
///     "axis_texel": [x, y],              // default: texture centre
///     "texture": { "image": "relative.png" }
///              | { "pattern": "flat", "width": w, "height": h, "value": v }
///              | { "pattern": "checker", "width": w, "height": h, "period": p, "low": a, "high": b }
///              | { "pattern": "dots", "width": w, "height": h, "rows": r, "cols": c, "spacing": s },
///     "blur_region": { "shape": "disc", "center": [x, y], "radius": r, "invert": false }
///                  | { "shape": "rect", "min": [x, y], "max": [x, y], "invert": false }
///   } ]
/// }
/// Image paths are relative to `base_dir`.
SceneFile parse_scene(std::string_view json_text, const std::filesystem::path& base_dir);
SceneFile load_scene(const std::filesystem::path& path);

Image procedural_texture(std::string_view pattern, int width, int height, double a, double b, double c);

} // namespace sweepfocus::app
