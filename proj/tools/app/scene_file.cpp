#include "scene_file.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "io.hpp"
#include "sweepfocus/dotgrid.hpp"
#include "sweepfocus/errors.hpp"
#include "sweepfocus/png_io.hpp"

namespace sweepfocus::app {

using nlohmann::json;

Image BlurRegion::rasterize(int width, int height) const {
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            bool inside = false;
            if (shape == Shape::Disc) {
                inside = std::hypot(x - center.x, y - center.y) <= radius;
            } else {
                inside = x >= min.x && x <= max.x && y >= min.y && y <= max.y;
            }
            img.at(x, y) = inside != invert ? 1.0 : 0.0;
        }
    }
    return img;
}

RegionLabel SceneLayerSpec::plan_label() const { return blur_region ? RegionLabel::Blur : label; }

std::vector<PlanObject> SceneFile::plan_objects() const {
    std::vector<PlanObject> out;
    for (const auto& l : layers) out.push_back({l.name, l.distance, l.plan_label()});
    return out;
}

Scene SceneFile::to_scene(double default_pixels_per_radian) const {
    Scene s;
    s.width = width;
    s.height = height;
    s.optical_center = optical_center;
    s.pixels_per_radian = pixels_per_radian.value_or(default_pixels_per_radian);
    s.ambient = ambient;
    for (const auto& l : layers) {
        Layer layer;
        layer.name = l.name;
        layer.texture = l.texture;
        layer.distance = l.distance;
        layer.pitch = l.pitch;
        layer.axis_texel = l.axis_texel;
        layer.label = l.plan_label();
        s.layers.push_back(std::move(layer));
    }
    return s;
}

Image procedural_texture(std::string_view pattern, int width, int height, double a, double b, double c) {
    if (width < 1 || height < 1) throw ValidationError("texture size must be >= 1x1");
    if (pattern == "flat") return Image(width, height, a);
    if (pattern == "checker") {
        const int period = static_cast<int>(a);
        if (period < 1) throw ValidationError("checker period must be >= 1");
        Image img(width, height);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) img.at(x, y) = ((x / period + y / period) % 2 == 0) ? c : b;
        }
        return img;
    }
    throw ValidationError("unknown texture pattern '" + std::string(pattern) + "'");
}

namespace {

Vec2 read_vec2(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Image read_texture(const json& t, const std::filesystem::path& base_dir) {
    if (t.contains("image")) {
        const auto path = base_dir / t.at("image").get<std::string>();
        if (!std::filesystem::exists(path)) throw ValidationError("texture image not found: " + path.string());
        return read_png(path);
    }
    const auto pattern = t.at("pattern").get<std::string>();
    const int w = t.at("width").get<int>();
    const int h = t.at("height").get<int>();
    if (pattern == "flat") return procedural_texture(pattern, w, h, t.value("value", 1.0), 0, 0);
    if (pattern == "checker") {
        return procedural_texture(pattern, w, h, t.value("period", 8), t.value("low", 0.2), t.value("high", 1.0));
    }
    if (pattern == "dots") {
        DotGridSpec spec;
        spec.rows = t.value("rows", 5);
        spec.cols = t.value("cols", 5);
        spec.spacing = t.value("spacing", 96.0);
        spec.center = {std::floor(0.5 * w), std::floor(0.5 * h)};
        return make_dot_grid(w, h, spec, t.value("dot_radius", 0.0));
    }
    throw ValidationError("unknown texture pattern '" + pattern + "'");
}

BlurRegion read_region(const json& r) {
    BlurRegion region;
    const auto shape = r.at("shape").get<std::string>();
    if (shape == "disc") {
        region.shape = BlurRegion::Shape::Disc;
        region.center = read_vec2(r.at("center"));
        region.radius = r.at("radius").get<double>();
        if (!(region.radius > 0.0)) throw ValidationError("blur_region radius must be positive");
    } else if (shape == "rect") {
        region.shape = BlurRegion::Shape::Rect;
        region.min = read_vec2(r.at("min"));
        region.max = read_vec2(r.at("max"));
    } else {
        throw ValidationError("unknown blur_region shape '" + shape + "'");
    }
    region.invert = r.value("invert", false);
    return region;
}

} // namespace

SceneFile parse_scene(std::string_view json_text, const std::filesystem::path& base_dir) {
    SceneFile scene;
    try {
        const json j = json::parse(json_text);
        if (j.value("version", 1) != 1) throw ValidationError("unsupported scene version");
        if (j.contains("canvas")) {
            scene.width = j.at("canvas").at("width").get<int>();
            scene.height = j.at("canvas").at("height").get<int>();
        }
        if (scene.width < 1 || scene.height < 1) throw ValidationError("canvas must be >= 1x1");
        scene.optical_center = j.contains("optical_center") ? read_vec2(j.at("optical_center"))
                                                             : Vec2{0.5 * (scene.width - 1), 0.5 * (scene.height - 1)};
        if (j.contains("pixels_per_radian")) scene.pixels_per_radian = j.at("pixels_per_radian").get<double>();
        scene.ambient = j.value("ambient", 0.0);
        for (const auto& lj : j.at("layers")) {
            SceneLayerSpec l;
            l.name = lj.at("name").get<std::string>();
            if (l.name.empty()) throw ValidationError("layer name must not be empty");
            for (const auto& other : scene.layers) {
                if (other.name == l.name) throw ValidationError("duplicate layer name '" + l.name + "'");
            }
            l.distance = lj.at("distance_mm").get<double>();
            if (!(l.distance > 0.0)) throw ValidationError("layer '" + l.name + "': distance_mm must be positive");
            l.label = parse_region_label(lj.value("label", std::string("focus")));
            l.pitch = lj.value("pitch_mm", 1.0);
            if (!(l.pitch > 0.0)) throw ValidationError("layer '" + l.name + "': pitch_mm must be positive");
            l.texture = read_texture(lj.at("texture"), base_dir);
            l.axis_texel = lj.contains("axis_texel")
                               ? read_vec2(lj.at("axis_texel"))
                               : Vec2{0.5 * (l.texture.width() - 1), 0.5 * (l.texture.height() - 1)};
            if (lj.contains("blur_region")) l.blur_region = read_region(lj.at("blur_region"));
            scene.layers.push_back(std::move(l));
        }
        if (scene.layers.empty()) throw ValidationError("scene needs at least one layer");
        std::stable_sort(scene.layers.begin(), scene.layers.end(),
                         [](const auto& a, const auto& b) { return a.distance < b.distance; });
        scene.gaze = j.value("gaze", scene.layers.front().name);
        if (std::none_of(scene.layers.begin(), scene.layers.end(),
                         [&](const auto& l) { return l.name == scene.gaze; })) {
            throw ValidationError("gaze target '" + scene.gaze + "' is not a layer");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scene: ") + e.what());
    }
    return scene;
}

SceneFile load_scene(const std::filesystem::path& path) {
    try {
        return parse_scene(read_text(path), path.parent_path());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

} // namespace sweepfocus::app
