#pragma once

// Command implementations. Each cmd_* is a pure function of its inputs and
// writes its outputs into the given directory or file.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "scene_file.hpp"
#include "sweepfocus/render.hpp"
#include "sweepfocus/schedule.hpp"
#include "sweepfocus/seam.hpp"
#include "sweepfocus/waveform_db.hpp"

namespace sweepfocus::app {

WaveformDb make_db(const ProjectConfig& config);
/// The database from `path` if given, else built from the config.
WaveformDb db_or_build(const ProjectConfig& config, const std::optional<std::filesystem::path>& path);

// ---- blur range ---------------------------------------------------------

struct BlurRangeRow {
    double power_D = 0.0;
    std::optional<double> near_border; ///< mm
    std::optional<double> far_border;  ///< mm
};

std::vector<BlurRangeRow> blur_range_table(const ProjectConfig& config, double from_D, double to_D, double step_D);
std::string blur_range_csv(const std::vector<BlurRangeRow>& rows);
Image blur_range_plot(const std::vector<BlurRangeRow>& rows, int width = 640, int height = 400);
void cmd_blur_range(const ProjectConfig& config, double from_D, double to_D, double step_D,
                    const std::filesystem::path& out_dir);

// ---- planning -----------------------------------------------------------

/// Masks per layer name, then per mask id.
using MaskSet = std::map<std::string, std::map<std::string, Image>>;

inline constexpr const char* kFocusMask = "focus";
inline constexpr const char* kBlurMask = "blur";

struct PlanResult {
    SweepPlan plan;
    IlluminationSchedule schedule;
    OutputWaveform waveform;
    MaskSet masks;
};

/// Minimum blur powers, sweep selection, frame schedule and illumination
/// masks. Layers with a blur region get feathered masks; masks are rounded
/// to the 16-bit grid they are stored on.
PlanResult plan_scene(const ProjectConfig& config, const SceneFile& scene, const WaveformDb& db);

/// Writes plan.json, schedule.json and masks/ (16-bit PNGs plus masks.json).
void cmd_plan(const ProjectConfig& config, const SceneFile& scene, const WaveformDb& db,
              const std::filesystem::path& out_dir);

void save_masks(const MaskSet& masks, const std::filesystem::path& dir);
MaskSet load_masks(const std::filesystem::path& dir);

// ---- rendering ----------------------------------------------------------

RenderedView render_scene(const ProjectConfig& config, const SceneFile& scene,
                          const IlluminationSchedule& schedule, const MaskSet& masks,
                          const std::string& gaze);
std::string provenance_json(const SceneFile& scene, const std::string& gaze, const GazeState& state,
                            const RenderedView& view);
/// Writes the PNG (8-bit sRGB, or 16-bit linear) and `<png stem>.json`.
void cmd_render(const ProjectConfig& config, const SceneFile& scene, const IlluminationSchedule& schedule,
                const MaskSet& masks, const std::string& gaze, const std::filesystem::path& out_png,
                bool linear16 = false);

// ---- dot grid -----------------------------------------------------------

struct DotGridRow {
    double distance = 0.0; ///< mm
    double power_D = 0.0;
    std::string condition; ///< "normal" or "proposed"
    double radius_px = 0.0;
    double model_radius_px = 0.0;
};

/// Dot grid at each distance, viewed by an eye focused on it, through the
/// lens at each power. "normal" holds the lens at that power; "proposed"
/// lights one projector frame at that power inside the narrowest sweep
/// from 0 to it. Radii are the mean of the 3x3 centre dots.
std::vector<DotGridRow> run_dotgrid(const ProjectConfig& config, const std::vector<double>& distances,
                                    const std::vector<double>& powers_D, const WaveformDb& db);
std::string dotgrid_csv(const std::vector<DotGridRow>& rows);
void cmd_dotgrid(const ProjectConfig& config, const std::vector<double>& distances,
                 const std::vector<double>& powers_D, const WaveformDb& db, const std::filesystem::path& out_csv);

// ---- seams --------------------------------------------------------------

struct SeamCondition {
    std::string texture; ///< "white" or "grey"
    double level = 1.0;  ///< uniform reflectance
    std::string geometry; ///< "overlap" (blur inside a disc) or "gap" (blur outside it)
    double power_D = 1.0;
    std::string name() const;
};

/// 2 textures x {gap, overlap} x {1 D, 2 D} for a plane at 500 mm.
std::vector<SeamCondition> seam_conditions();

struct SeamResult {
    SeamCondition condition;
    double scale = 1.0;
    std::size_t band_pixels = 0;
    double binary_max_deviation = 0.0;  ///< 8-bit render vs flat, in [0, 1]
    double feather_max_deviation = 0.0; ///< same, with feathered masks
    double complementarity_error = 0.0; ///< max |focus + apparent blur - 1| before quantization
    Image binary;
    Image feathered;
};

inline constexpr double kSeamDistance = 500.0; // mm

/// Renders the lit plane with the lens at 0 and at the condition's power,
/// without blur kernels, so only the geometric seam remains.
SeamResult run_seam_condition(const ProjectConfig& config, const SeamCondition& condition);
void cmd_seam_demo(const ProjectConfig& config, const std::filesystem::path& out_dir);

} // namespace sweepfocus::app
