#include "config.hpp"

#include <nlohmann/json.hpp>

#include "io.hpp"
#include "sweepfocus/errors.hpp"

namespace sweepfocus::app {

using nlohmann::json;

void ProjectConfig::validate() const {
    eye.validate();
    if (!(vertex_distance > 0.0)) throw ValidationError("config: vertex_distance_mm must be positive");
    if (!(alpha > 0.0)) throw ValidationError("config: alpha_D must be positive");
    if (projector_width < 1 || projector_height < 1) throw ValidationError("config: projector raster must be >= 1x1");
    if (!(sweep_frequency > 0.0)) throw ValidationError("config: sweep_hz must be positive");
    if (schedule.frame_us < 1) throw ValidationError("config: frame_us must be positive");
    if (schedule.trigger_delay_us < 0) throw ValidationError("config: trigger_delay_us must be >= 0");
    if (!(schedule.tolerance > 0.0)) throw ValidationError("config: tolerance_D must be positive");
    if (schedule.frames_per_target < 0) throw ValidationError("config: frames_per_target must be >= 0");
    if (!(etl.gain > 0.0) || !(etl.time_constant >= 0.0) || !(etl.harmonic2 >= 0.0) || !(etl.sample_spacing > 0.0)) {
        throw ValidationError("config: invalid etl parameters");
    }
    if (voltage_grid.count < 1 || !(voltage_grid.step > 0.0)) throw ValidationError("config: invalid voltage grid");
    if (!(pixels_per_radian > 0.0)) throw ValidationError("config: pixels_per_radian must be positive");
    if (subsamples < 1) throw ValidationError("config: subsamples must be >= 1");
}

RenderOptions ProjectConfig::render_options() const {
    RenderOptions o;
    o.eye = eye;
    o.vertex_distance = vertex_distance;
    o.integrate_within_frame = integrate_within_frame;
    o.subsamples = subsamples;
    o.apply_psf = apply_psf;
    return o;
}

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_diopters(const json& j, const char* key, double& out_mm_inv) {
    if (j.contains(key)) out_mm_inv = diopters_to_inv_mm(j.at(key).get<double>());
}

} // namespace

ProjectConfig parse_config(std::string_view json_text) {
    ProjectConfig c;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) throw ValidationError("config: expected a JSON object");
        if (j.contains("version") && j.at("version").get<int>() != 1) {
            throw ValidationError("config: unsupported version");
        }
        if (j.contains("eye")) {
            const auto& e = j.at("eye");
            read_opt(e, "pupil_mm", c.eye.pupil_diameter);
            read_opt(e, "lens_retina_mm", c.eye.lens_retina_distance);
            read_diopters(e, "far_power_D", c.eye.far_power);
            read_diopters(e, "near_power_D", c.eye.near_power);
            read_opt(e, "acceptable_coc_mm", c.eye.acceptable_coc);
        }
        read_opt(j, "vertex_distance_mm", c.vertex_distance);
        read_diopters(j, "alpha_D", c.alpha);
        if (j.contains("projector")) {
            const auto& p = j.at("projector");
            read_opt(p, "width", c.projector_width);
            read_opt(p, "height", c.projector_height);
            read_opt(p, "frame_us", c.schedule.frame_us);
            read_opt(p, "trigger_delay_us", c.schedule.trigger_delay_us);
        }
        read_opt(j, "sweep_hz", c.sweep_frequency);
        if (j.contains("etl")) {
            const auto& e = j.at("etl");
            if (e.contains("gain_D_per_V")) c.etl.gain = diopters_to_inv_mm(e.at("gain_D_per_V").get<double>());
            read_opt(e, "time_constant_s", c.etl.time_constant);
            read_opt(e, "harmonic2", c.etl.harmonic2);
            read_opt(e, "sample_spacing_s", c.etl.sample_spacing);
        }
        if (j.contains("voltage_grid")) {
            const auto& g = j.at("voltage_grid");
            read_opt(g, "start_V", c.voltage_grid.start);
            read_opt(g, "step_V", c.voltage_grid.step);
            read_opt(g, "count", c.voltage_grid.count);
        }
        read_diopters(j, "tolerance_D", c.schedule.tolerance);
        read_opt(j, "frames_per_target", c.schedule.frames_per_target);
        if (j.contains("render")) {
            const auto& r = j.at("render");
            read_opt(r, "pixels_per_radian", c.pixels_per_radian);
            read_opt(r, "integrate_within_frame", c.integrate_within_frame);
            read_opt(r, "subsamples", c.subsamples);
            read_opt(r, "apply_psf", c.apply_psf);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ProjectConfig load_config(const std::filesystem::path& path) {
    try {
        return parse_config(read_text(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const ProjectConfig& c) {
    json j;
    j["version"] = 1;
    j["eye"] = {{"pupil_mm", c.eye.pupil_diameter},
                {"lens_retina_mm", c.eye.lens_retina_distance},
                {"far_power_D", inv_mm_to_diopters(c.eye.far_power)},
                {"near_power_D", inv_mm_to_diopters(c.eye.near_power)},
                {"acceptable_coc_mm", c.eye.acceptable_coc}};
    j["vertex_distance_mm"] = c.vertex_distance;
    j["alpha_D"] = inv_mm_to_diopters(c.alpha);
    j["projector"] = {{"width", c.projector_width},
                      {"height", c.projector_height},
                      {"frame_us", c.schedule.frame_us},
                      {"trigger_delay_us", c.schedule.trigger_delay_us}};
    j["sweep_hz"] = c.sweep_frequency;
    j["etl"] = {{"gain_D_per_V", inv_mm_to_diopters(c.etl.gain)},
                {"time_constant_s", c.etl.time_constant},
                {"harmonic2", c.etl.harmonic2},
                {"sample_spacing_s", c.etl.sample_spacing}};
    j["voltage_grid"] = {{"start_V", c.voltage_grid.start}, {"step_V", c.voltage_grid.step}, {"count", c.voltage_grid.count}};
    j["tolerance_D"] = inv_mm_to_diopters(c.schedule.tolerance);
    j["frames_per_target"] = c.schedule.frames_per_target;
    j["render"] = {{"pixels_per_radian", c.pixels_per_radian},
                   {"integrate_within_frame", c.integrate_within_frame},
                   {"subsamples", c.subsamples},
                   {"apply_psf", c.apply_psf}};
    return j.dump(2) + "\n";
}

} // namespace sweepfocus::app
