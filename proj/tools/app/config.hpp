#pragma once

// Project configuration: physical constants, hardware timing and render
// settings shared by every command.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sweepfocus/etl.hpp"
#include "sweepfocus/optics.hpp"
#include "sweepfocus/render.hpp"
#include "sweepfocus/schedule.hpp"
#include "sweepfocus/waveform_db.hpp"

namespace sweepfocus::app {

struct ProjectConfig {
    EyeModel eye = EyeModel::standard();
    double vertex_distance = 15.0;      ///< mm
    double alpha = kDefaultAlpha;       ///< mm^-1
    int projector_width = 1024;
    int projector_height = 768;
    double sweep_frequency = kSweepFrequency;
    ScheduleOptions schedule;
    EtlModel etl;
    VoltageGrid voltage_grid;
    double pixels_per_radian = 24.0 / 0.0084;
    bool integrate_within_frame = true;
    int subsamples = 8;
    bool apply_psf = true;

    void validate() const;
    RenderOptions render_options() const;
};

/// Every key is optional. Powers are given in diopters, lengths in mm:
///
/// { "version": 1,
///   "eye": { "pupil_mm", "lens_retina_mm", "far_power_D", "near_power_D", "acceptable_coc_mm" },
///   "vertex_distance_mm", "alpha_D",
///   "projector": { "width", "height", "frame_us", "trigger_delay_us" },
///   "sweep_hz",
///   "etl": { "gain_D_per_V", "time_constant_s", "harmonic2", "sample_spacing_s" },
///   "voltage_grid": { "start_V", "step_V", "count" },
///   "tolerance_D", "frames_per_target",
///   "render": { "pixels_per_radian", "integrate_within_frame", "subsamples", "apply_psf" } }
ProjectConfig parse_config(std::string_view json_text);
ProjectConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ProjectConfig& config);

} // namespace sweepfocus::app
