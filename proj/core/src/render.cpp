#include "sweepfocus/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sweepfocus/errors.hpp"
#include "sweepfocus/psf.hpp"
#include "sweepfocus/scaling.hpp"

namespace sweepfocus {

std::size_t Scene::layer_index(const std::string& name) const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].name == name) return i;
    }
    throw ValidationError("scene has no layer named '" + name + "'");
}

void Scene::validate() const {
    if (width < 1 || height < 1) throw ValidationError("scene raster must be at least 1x1");
    if (!(pixels_per_radian > 0.0)) throw ValidationError("pixels_per_radian must be positive");
    if (layers.empty()) throw ValidationError("scene needs at least one layer");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        if (!(l.distance > 0.0)) throw ValidationError("layer '" + l.name + "': distance must be positive");
        if (!(l.pitch > 0.0)) throw ValidationError("layer '" + l.name + "': pitch must be positive");
        if (l.texture.empty()) throw ValidationError("layer '" + l.name + "': empty texture");
        for (const auto& [id, m] : l.masks) {
            if (m.width() != l.texture.width() || m.height() != l.texture.height()) {
                throw ValidationError("layer '" + l.name + "': mask '" + id + "' does not match the texture size");
            }
        }
        if (i > 0 && layers[i - 1].distance > l.distance) {
            throw ValidationError("scene layers must be sorted by distance");
        }
    }
}

GazeState accommodate(const Scene& scene, std::size_t layer, const EyeModel& eye, double vertex_distance) {
    if (layer >= scene.layers.size()) throw ValidationError("gaze target does not exist");
    const double d = scene.layers[layer].distance + vertex_distance;
    const double conjugate = 1.0 / eye.lens_retina_distance + 1.0 / d;
    GazeState g;
    g.layer = layer;
    g.eye_power = std::clamp(conjugate, eye.far_power, eye.near_power);
    g.clamped = g.eye_power != conjugate;
    return g;
}

double psf_diameter_px(const OpticalStack& stack, double object_distance, double pixels_per_radian) {
    const double d_r = blur_circle_diameter(stack, object_distance);
    return d_r / stack.eye.lens_retina_distance * pixels_per_radian;
}

namespace {

double exposure_gain(const IlluminationSchedule& schedule) {
    std::map<double, std::int64_t> lit_us;
    for (const auto& s : schedule.slots) lit_us[s.target_power] += s.t_end_us - s.t_start_us;
    std::int64_t longest = 0;
    for (const auto& [power, us] : lit_us) longest = std::max(longest, us);
    if (longest == 0) return 1.0;
    return schedule.period * 1e6 / static_cast<double>(longest);
}

} // namespace

RenderedView render(const Scene& scene, const IlluminationSchedule& schedule,
                    const OutputWaveform* waveform, const GazeState& gaze, const RenderOptions& options) {
    scene.validate();
    if (gaze.layer >= scene.layers.size()) throw ValidationError("gaze target does not exist");
    if (options.integrate_within_frame && waveform == nullptr) {
        throw ValidationError("within-frame integration needs the lens waveform");
    }
    if (options.subsamples < 1) throw ValidationError("subsamples must be >= 1");

    for (const auto& slot : schedule.slots) {
        for (const auto& layer : scene.layers) {
            if (!layer.masks.contains(slot.mask_id)) {
                throw ValidationError("slot " + std::to_string(slot.slot_id) + ": mask '" + slot.mask_id +
                                      "' is not defined for layer '" + layer.name + "'");
            }
        }
    }

    RenderedView view;
    view.image = Image(scene.width, scene.height);
    view.exposure_gain = options.auto_exposure ? exposure_gain(schedule) : 1.0;
    const double period_us = schedule.period * 1e6;

    OpticalStack stack;
    stack.eye = options.eye;
    stack.vertex_distance = options.vertex_distance;
    stack.eye_power = gaze.eye_power;

    std::map<std::pair<std::size_t, std::string>, Image> lit_cache;
    const auto lit_texture = [&](std::size_t li, const std::string& mask_id) -> const Image& {
        auto key = std::make_pair(li, mask_id);
        auto it = lit_cache.find(key);
        if (it == lit_cache.end()) {
            const auto& layer = scene.layers[li];
            it = lit_cache.emplace(key, multiply(layer.texture, layer.masks.at(mask_id))).first;
        }
        return it->second;
    };

    for (const auto& slot : schedule.slots) {
        SlotContribution contrib;
        contrib.slot_id = slot.slot_id;
        contrib.mask_id = slot.mask_id;
        contrib.nominal_power = slot.target_power;
        contrib.weight = static_cast<double>(slot.t_end_us - slot.t_start_us) / period_us * view.exposure_gain;

        if (options.integrate_within_frame) {
            const int k = options.subsamples;
            const double frame = static_cast<double>(slot.t_end_us - slot.t_start_us);
            for (int j = 0; j < k; ++j) {
                const double t_us = static_cast<double>(slot.t_start_us) + frame * (j + 0.5) / k;
                contrib.powers.push_back(waveform->power_at(t_us * 1e-6));
            }
            // A lens holding still within the frame is one exposure, not k identical ones.
            if (std::all_of(contrib.powers.begin(), contrib.powers.end(),
                            [&](double p) { return p == contrib.powers.front(); })) {
                contrib.powers.resize(1);
            }
        } else {
            contrib.powers.push_back(slot.target_power);
        }
        const double share = contrib.weight / static_cast<double>(contrib.powers.size());

        for (std::size_t li = 0; li < scene.layers.size(); ++li) {
            const auto& layer = scene.layers[li];
            const Image& lit = lit_texture(li, slot.mask_id);
            LayerContribution lc;
            lc.layer = layer.name;
            lc.lit = lit.count_nonzero() > 0;
            lc.scale = 0.0;

            const double texel_px =
                scene.pixels_per_radian * layer.pitch / (layer.distance + options.vertex_distance);
            for (double power : contrib.powers) {
                stack.etl_power = power;
                const double s = scaling_factor(layer.distance, options.vertex_distance, power).scale;
                const double d_r = blur_circle_diameter(stack, layer.distance);
                const double psf = d_r / stack.eye.lens_retina_distance * scene.pixels_per_radian;
                lc.mean_power += power;
                lc.scale += s;
                lc.blur_diameter += d_r;
                lc.psf_px += psf;
                if (!lc.lit) continue;

                Image img = resample_scaled(lit, scene.width, scene.height, scene.optical_center,
                                            layer.axis_texel, texel_px * s);
                if (options.apply_psf) img = convolve(img, DiscKernel(psf));
                img *= share;
                view.image += img;
            }
            const double n = static_cast<double>(contrib.powers.size());
            lc.mean_power /= n;
            lc.scale /= n;
            lc.blur_diameter /= n;
            lc.psf_px /= n;
            contrib.layers.push_back(lc);
        }
        view.slots.push_back(std::move(contrib));
    }

    if (scene.ambient != 0.0) {
        for (auto& v : view.image.pixels()) v += scene.ambient;
    }
    return view;
}

} // namespace sweepfocus
