#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "io.hpp"
#include "sweepfocus/blur_range.hpp"
#include "sweepfocus/dotgrid.hpp"
#include "sweepfocus/errors.hpp"
#include "sweepfocus/png_io.hpp"
#include "sweepfocus/scaling.hpp"

namespace sweepfocus::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Shortest decimal that round-trips, for CSV cells.
std::string num(double v) {
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "inf"; }

Image quantize16(const Image& img) {
    Image out = img;
    for (auto& v : out.pixels()) v = std::round(std::clamp(v, 0.0, 1.0) * 65535.0) / 65535.0;
    return out;
}

} // namespace

WaveformDb make_db(const ProjectConfig& config) {
    return build_db(config.voltage_grid, config.etl, config.sweep_frequency);
}

WaveformDb db_or_build(const ProjectConfig& config, const std::optional<fs::path>& path) {
    if (!path) return make_db(config);
    WaveformDb db = WaveformDb::load(*path);
    if (!(db.model() == config.etl) || !(db.grid() == config.voltage_grid) || db.frequency() != config.sweep_frequency) {
        throw ValidationError(path->string() + ": database was built with a different configuration");
    }
    return db;
}

// ---- blur range ---------------------------------------------------------

std::vector<BlurRangeRow> blur_range_table(const ProjectConfig& config, double from_D, double to_D, double step_D) {
    if (!(step_D > 0.0) || !(to_D >= from_D) || from_D < 0.0) throw ValidationError("blur-range: invalid power grid");
    std::vector<BlurRangeRow> rows;
    const auto n = static_cast<long>(std::floor((to_D - from_D) / step_D + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double p_D = std::round((from_D + static_cast<double>(i) * step_D) * 1e9) / 1e9;
        const BlurBorders b = blur_borders(config.eye, config.vertex_distance, diopters_to_inv_mm(p_D));
        rows.push_back({p_D, b.near_border, b.far_border});
    }
    return rows;
}

std::string blur_range_csv(const std::vector<BlurRangeRow>& rows) {
    std::ostringstream out;
    out << "power_D,near_border_mm,far_border_mm\n";
    for (const auto& r : rows) out << num(r.power_D) << ',' << opt_num(r.near_border) << ',' << opt_num(r.far_border) << '\n';
    return out.str();
}

Image blur_range_plot(const std::vector<BlurRangeRow>& rows, int width, int height) {
    // Distance on a log axis from 10 mm to 10 m, power linear; white background.
    Image img(width, height, 1.0);
    const int left = 48, right = 16, top = 16, bottom = 40;
    const int pw = width - left - right;
    const int ph = height - top - bottom;
    if (pw < 2 || ph < 2 || rows.empty()) return img;
    const double p_max = std::max(rows.back().power_D, 1e-9);
    const double lo = std::log10(10.0), hi = std::log10(10000.0);
    const auto px = [&](double p) { return left + p / p_max * (pw - 1); };
    const auto py = [&](double d) { return top + (hi - std::log10(std::clamp(d, 10.0, 10000.0))) / (hi - lo) * (ph - 1); };
    const auto dot = [&](double x, double y, double v, int r) {
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                const int ix = static_cast<int>(std::lround(x)) + dx;
                const int iy = static_cast<int>(std::lround(y)) + dy;
                if (ix >= 0 && iy >= 0 && ix < width && iy < height) img.at(ix, iy) = std::min(img.at(ix, iy), v);
            }
        }
    };
    for (int x = left; x < left + pw; ++x) dot(x, top + ph - 1, 0.0, 0);
    for (int y = top; y < top + ph; ++y) dot(left, y, 0.0, 0);
    for (double d : {10.0, 100.0, 1000.0, 10000.0}) {
        for (int x = left; x < left + pw; x += 4) dot(x, py(d), 0.6, 0);
    }
    for (int k = 0; k <= static_cast<int>(p_max); ++k) {
        for (int y = top; y < top + ph; y += 4) dot(px(k), y, 0.6, 0);
    }
    for (const auto& r : rows) {
        if (r.far_border) dot(px(r.power_D), py(*r.far_border), 0.0, 1);
        if (r.near_border) dot(px(r.power_D), py(*r.near_border), 0.35, 1);
    }
    return img;
}

void cmd_blur_range(const ProjectConfig& config, double from_D, double to_D, double step_D, const fs::path& out_dir) {
    ensure_dir(out_dir);
    const auto rows = blur_range_table(config, from_D, to_D, step_D);
    write_text(out_dir / "blur_range.csv", blur_range_csv(rows));
    write_png(out_dir / "blur_range.png", blur_range_plot(rows));
}

// ---- planning -----------------------------------------------------------

PlanResult plan_scene(const ProjectConfig& config, const SceneFile& scene, const WaveformDb& db) {
    const auto objects = scene.plan_objects();
    PlanResult r;
    r.plan = plan_sweep(objects, config.eye, config.vertex_distance, config.alpha, db);
    const WaveformEntry& entry = select_wave(db, r.plan.p_low, r.plan.p_high);
    r.waveform = entry.output;

    for (const auto& l : scene.layers) {
        const int w = l.texture.width();
        const int h = l.texture.height();
        auto& m = r.masks[l.name];
        if (l.blur_region) {
            RegionMask region;
            region.weights = l.blur_region->rasterize(w, h);
            region.label = RegionLabel::Blur;
            region.optical_center = l.axis_texel;
            region.pixels_per_mm = 1.0 / l.pitch;
            const double s = scaling_factor(l.distance, config.vertex_distance, r.plan.p_high).scale;
            const BlendPair pair = feather(region, s);
            m[kFocusMask] = quantize16(pair.focus);
            m[kBlurMask] = quantize16(pair.blur_projector);
        } else {
            const bool blur = l.label == RegionLabel::Blur;
            m[kFocusMask] = Image(w, h, blur ? 0.0 : 1.0);
            m[kBlurMask] = Image(w, h, blur ? 1.0 : 0.0);
        }
    }
    r.schedule = build_schedule(r.plan, r.waveform, {kFocusMask}, {kBlurMask}, config.schedule);
    return r;
}

void save_masks(const MaskSet& masks, const fs::path& dir) {
    ensure_dir(dir);
    json index;
    index["version"] = 1;
    index["masks"] = json::array();
    for (const auto& [layer, by_id] : masks) {
        for (const auto& [id, img] : by_id) {
            const std::string file = layer + "__" + id + ".png";
            write_png(dir / file, img, PngEncoding::Linear16);
            index["masks"].push_back({{"layer", layer}, {"mask_id", id}, {"file", file}});
        }
    }
    write_text(dir / "masks.json", index.dump(2) + "\n");
}

MaskSet load_masks(const fs::path& dir) {
    MaskSet masks;
    try {
        const json index = json::parse(read_text(dir / "masks.json"));
        if (index.value("version", 1) != 1) throw ValidationError("masks.json: unsupported version");
        for (const auto& e : index.at("masks")) {
            masks[e.at("layer").get<std::string>()][e.at("mask_id").get<std::string>()] =
                read_png(dir / e.at("file").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ValidationError((dir / "masks.json").string() + ": " + e.what());
    }
    return masks;
}

void cmd_plan(const ProjectConfig& config, const SceneFile& scene, const WaveformDb& db, const fs::path& out_dir) {
    const PlanResult r = plan_scene(config, scene, db);
    ensure_dir(out_dir);
    write_text(out_dir / "plan.json", plan_to_json(r.plan));
    write_text(out_dir / "schedule.json", schedule_to_json(r.schedule));
    save_masks(r.masks, out_dir / "masks");
}

// ---- rendering ----------------------------------------------------------

RenderedView render_scene(const ProjectConfig& config, const SceneFile& file, const IlluminationSchedule& schedule,
                          const MaskSet& masks, const std::string& gaze) {
    Scene scene = file.to_scene(config.pixels_per_radian);
    for (auto& layer : scene.layers) {
        auto it = masks.find(layer.name);
        if (it == masks.end()) throw ValidationError("no masks for layer '" + layer.name + "'");
        layer.masks = it->second;
    }
    const GazeState state = accommodate(scene, scene.layer_index(gaze), config.eye, config.vertex_distance);
    const OutputWaveform waveform = synth_etl_response(schedule.wave, config.etl);
    return render(scene, schedule, &waveform, state, config.render_options());
}

std::string provenance_json(const SceneFile& file, const std::string& gaze, const GazeState& state,
                            const RenderedView& view) {
    json j;
    j["version"] = 1;
    j["gaze"] = {{"layer", gaze},
                 {"eye_power_D", inv_mm_to_diopters(state.eye_power)},
                 {"clamped", state.clamped}};
    j["canvas"] = {{"width", file.width}, {"height", file.height}};
    j["exposure_gain"] = view.exposure_gain;
    j["slots"] = json::array();
    for (const auto& s : view.slots) {
        json sj;
        sj["slot_id"] = s.slot_id;
        sj["mask_id"] = s.mask_id;
        sj["nominal_power_D"] = inv_mm_to_diopters(s.nominal_power);
        sj["weight"] = s.weight;
        sj["powers_D"] = json::array();
        for (double p : s.powers) sj["powers_D"].push_back(inv_mm_to_diopters(p));
        sj["layers"] = json::array();
        for (const auto& l : s.layers) {
            sj["layers"].push_back({{"layer", l.layer},
                                    {"mean_power_D", inv_mm_to_diopters(l.mean_power)},
                                    {"blur_diameter_mm", l.blur_diameter},
                                    {"psf_px", l.psf_px},
                                    {"scale", l.scale},
                                    {"lit", l.lit}});
        }
        j["slots"].push_back(std::move(sj));
    }
    return j.dump(2) + "\n";
}

void cmd_render(const ProjectConfig& config, const SceneFile& file, const IlluminationSchedule& schedule,
                const MaskSet& masks, const std::string& gaze, const fs::path& out_png, bool linear16) {
    const RenderedView view = render_scene(config, file, schedule, masks, gaze);
    Scene scene = file.to_scene(config.pixels_per_radian);
    const GazeState state = accommodate(scene, scene.layer_index(gaze), config.eye, config.vertex_distance);
    if (out_png.has_parent_path()) ensure_dir(out_png.parent_path());
    write_png(out_png, view.image, linear16 ? PngEncoding::Linear16 : PngEncoding::Srgb8);
    fs::path meta = out_png;
    meta.replace_extension(".json");
    write_text(meta, provenance_json(file, gaze, state, view));
}

// ---- dot grid -----------------------------------------------------------

namespace {

constexpr int kDotCanvas = 640;

double mean_radius(const Image& img, const DotGridSpec& spec) {
    const auto dots = measure_dot_grid(img, spec);
    double sum = 0.0;
    for (const auto& d : dots) sum += d.radius;
    return sum / static_cast<double>(dots.size());
}

} // namespace

std::vector<DotGridRow> run_dotgrid(const ProjectConfig& config, const std::vector<double>& distances,
                                    const std::vector<double>& powers_D, const WaveformDb& db) {
    DotGridSpec spec;
    spec.center = {kDotCanvas / 2.0, kDotCanvas / 2.0};
    const RenderOptions options = config.render_options();
    std::vector<DotGridRow> rows;
    for (double d : distances) {
        if (!(d > 0.0)) throw ValidationError("dotgrid: distances must be positive");
        Scene scene;
        scene.width = kDotCanvas;
        scene.height = kDotCanvas;
        scene.optical_center = spec.center;
        scene.pixels_per_radian = config.pixels_per_radian;
        Layer layer;
        layer.name = "grid";
        layer.texture = make_dot_grid(kDotCanvas, kDotCanvas, spec);
        layer.distance = d;
        layer.pitch = (d + config.vertex_distance) / config.pixels_per_radian; // one texel per pixel unpowered
        layer.axis_texel = spec.center;
        layer.masks["lit"] = Image(kDotCanvas, kDotCanvas, 1.0);
        scene.layers.push_back(std::move(layer));
        const GazeState gaze = accommodate(scene, 0, config.eye, config.vertex_distance);

        for (double p_D : powers_D) {
            if (p_D < 0.0) throw ValidationError("dotgrid: powers must be >= 0");
            const double p = diopters_to_inv_mm(p_D);
            const WaveformEntry& entry = select_wave(db, 0.0, p);
            const ScheduleTarget target{p, {"lit"}};
            const IlluminationSchedule schedule =
                schedule_targets(entry.output, entry.wave, std::span(&target, 1), config.schedule);
            const OutputWaveform held(std::vector<double>(entry.output.size(), p), entry.output.sample_period());

            OpticalStack stack;
            stack.eye = config.eye;
            stack.vertex_distance = config.vertex_distance;
            stack.eye_power = gaze.eye_power;
            stack.etl_power = p;
            const double model = 0.5 * psf_diameter_px(stack, d, config.pixels_per_radian);

            const RenderedView normal = render(scene, schedule, &held, gaze, options);
            const RenderedView proposed = render(scene, schedule, &entry.output, gaze, options);
            rows.push_back({d, p_D, "normal", mean_radius(normal.image, spec), model});
            rows.push_back({d, p_D, "proposed", mean_radius(proposed.image, spec), model});
        }
    }
    return rows;
}

std::string dotgrid_csv(const std::vector<DotGridRow>& rows) {
    std::ostringstream out;
    out << "distance_mm,power_D,condition,radius_px,model_radius_px\n";
    for (const auto& r : rows) {
        out << num(r.distance) << ',' << num(r.power_D) << ',' << r.condition << ',' << num(r.radius_px) << ','
            << num(r.model_radius_px) << '\n';
    }
    return out.str();
}

void cmd_dotgrid(const ProjectConfig& config, const std::vector<double>& distances, const std::vector<double>& powers_D,
                 const WaveformDb& db, const fs::path& out_csv) {
    const auto rows = run_dotgrid(config, distances, powers_D, db);
    if (out_csv.has_parent_path()) ensure_dir(out_csv.parent_path());
    write_text(out_csv, dotgrid_csv(rows));
}

// ---- seams --------------------------------------------------------------

std::string SeamCondition::name() const {
    return texture + "_" + geometry + "_" + num(power_D) + "D";
}

std::vector<SeamCondition> seam_conditions() {
    std::vector<SeamCondition> out;
    for (const auto& [tex, level] : {std::pair{"white", 1.0}, std::pair{"grey", 0.5}}) {
        for (const char* geometry : {"gap", "overlap"}) {
            for (double p : {1.0, 2.0}) out.push_back({tex, level, geometry, p});
        }
    }
    return out;
}

namespace {

constexpr int kSeamSize = 384;
// Perceived raster at 1024 px/rad and a texel pitch of (500 + 15) / 1024 mm
// maps one texel onto exactly one pixel, so the renderer resamples the blur
// mask exactly as the feathering did.
constexpr double kSeamPixelsPerRadian = 1024.0;

/// Largest |q(a) - q(b)| / 255 where q rounds to the 8-bit grid without
/// clipping, so bright bands on white stay visible.
double max_deviation8(const Image& img, double flat) {
    const long ref = std::lround(flat * 255.0);
    long worst = 0;
    for (double v : img.pixels()) worst = std::max(worst, std::labs(std::lround(v * 255.0) - ref));
    return static_cast<double>(worst) / 255.0;
}

Image render_pair(const ProjectConfig& config, const SeamCondition& c, const BlendPair& pair, double p) {
    Scene scene;
    scene.width = kSeamSize;
    scene.height = kSeamSize;
    scene.optical_center = pair.optical_center;
    scene.pixels_per_radian = kSeamPixelsPerRadian;
    Layer layer;
    layer.name = "plane";
    layer.texture = Image(kSeamSize, kSeamSize, c.level);
    layer.distance = kSeamDistance;
    layer.pitch = (kSeamDistance + config.vertex_distance) / kSeamPixelsPerRadian;
    layer.axis_texel = pair.optical_center;
    layer.masks[kFocusMask] = pair.focus;
    layer.masks[kBlurMask] = pair.blur_projector;
    scene.layers.push_back(std::move(layer));

    IlluminationSchedule schedule;
    schedule.frame_us = config.schedule.frame_us;
    schedule.trigger_delay_us = config.schedule.trigger_delay_us;
    schedule.period = 1.0 / config.sweep_frequency;
    const std::int64_t f = config.schedule.frame_us;
    schedule.slots.push_back({0, 0.0, 0, f, -config.schedule.trigger_delay_us, kFocusMask});
    schedule.slots.push_back({1, p, 2 * f, 3 * f, 2 * f - config.schedule.trigger_delay_us, kBlurMask});

    RenderOptions options = config.render_options();
    options.integrate_within_frame = false;
    options.apply_psf = false;
    const GazeState gaze = accommodate(scene, 0, config.eye, config.vertex_distance);
    return render(scene, schedule, nullptr, gaze, options).image;
}

} // namespace

SeamResult run_seam_condition(const ProjectConfig& config, const SeamCondition& c) {
    const double p = diopters_to_inv_mm(c.power_D);
    SeamResult r;
    r.condition = c;
    r.scale = scaling_factor(kSeamDistance, config.vertex_distance, p).scale;

    RegionMask region;
    region.optical_center = {kSeamSize / 2.0, kSeamSize / 2.0};
    region.label = RegionLabel::Blur;
    region.weights = Image(kSeamSize, kSeamSize);
    const Vec2 disc{200.0, 176.0};
    const double radius = 100.0;
    const bool overlap = c.geometry == "overlap";
    if (!overlap && c.geometry != "gap") throw ValidationError("seam geometry must be 'gap' or 'overlap'");
    for (int y = 0; y < kSeamSize; ++y) {
        for (int x = 0; x < kSeamSize; ++x) {
            const bool inside = std::hypot(x - disc.x, y - disc.y) <= radius;
            region.weights.at(x, y) = inside == overlap ? 1.0 : 0.0;
        }
    }
    r.band_pixels = seam_region(region, r.scale).pixels();

    const BlendPair binary = binary_pair(region, r.scale);
    const BlendPair feathered = feather(region, r.scale);
    for (std::size_t i = 0; i < feathered.focus.size(); ++i) {
        const double sum = feathered.focus.pixels()[i] + feathered.blur_apparent.pixels()[i];
        r.complementarity_error = std::max(r.complementarity_error, std::abs(sum - 1.0));
    }
    r.binary = render_pair(config, c, binary, p);
    r.feathered = render_pair(config, c, feathered, p);
    r.binary_max_deviation = max_deviation8(r.binary, c.level);
    r.feather_max_deviation = max_deviation8(r.feathered, c.level);
    return r;
}

void cmd_seam_demo(const ProjectConfig& config, const fs::path& out_dir) {
    ensure_dir(out_dir);
    std::ostringstream csv;
    csv << "condition,texture,geometry,power_D,scale,band_pixels,binary_max_dev_255,feather_max_dev_255,"
           "complementarity_error\n";
    for (const auto& c : seam_conditions()) {
        const SeamResult r = run_seam_condition(config, c);
        // Halve the radiance so bright bands on white survive 8-bit output.
        Image b = r.binary;
        Image f = r.feathered;
        b *= 0.5;
        f *= 0.5;
        write_png(out_dir / (c.name() + "_binary.png"), b);
        write_png(out_dir / (c.name() + "_feathered.png"), f);
        csv << c.name() << ',' << c.texture << ',' << c.geometry << ',' << num(c.power_D) << ',' << num(r.scale) << ','
            << r.band_pixels << ',' << num(r.binary_max_deviation * 255.0) << ','
            << num(r.feather_max_deviation * 255.0) << ',' << num(r.complementarity_error) << '\n';
    }
    write_text(out_dir / "seams.csv", csv.str());
}

} // namespace sweepfocus::app
