// sweepfocus command-line tool.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/io.hpp"
#include "app/scene_file.hpp"
#include "sweepfocus/errors.hpp"

namespace fs = std::filesystem;
using namespace sweepfocus;
using namespace sweepfocus::app;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitModel = 3;

ProjectConfig config_from(const std::string& path) {
    return path.empty() ? ProjectConfig{} : load_config(path);
}

std::optional<fs::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Focal-sweep planning, scheduling and perception simulation"};
    cli.require_subcommand(1);
    std::string config_path;
    cli.add_option("-c,--config", config_path, "Project configuration JSON")->check(CLI::ExistingFile);

    // blur-range
    auto* br = cli.add_subcommand("blur-range", "Near/far blur borders over a grid of lens powers");
    double br_from = 0.0, br_to = 10.0, br_step = 0.05;
    std::string br_out = "out/blur_range";
    br->add_option("--from", br_from, "First power (D)");
    br->add_option("--to", br_to, "Last power (D)");
    br->add_option("--step", br_step, "Power step (D)");
    br->add_option("-o,--out", br_out, "Output directory");

    // db
    auto* db = cli.add_subcommand("db", "Build the lens waveform database");
    std::string db_out = "out/waveforms.sfdb";
    db->add_option("-o,--out", db_out, "Output file");

    // plan
    auto* plan = cli.add_subcommand("plan", "Plan the sweep, schedule and masks for a scene");
    std::string plan_scene_path, plan_out = "out/plan", plan_db;
    plan->add_option("-s,--scene", plan_scene_path, "Scene JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("-o,--out", plan_out, "Output directory");
    plan->add_option("--db", plan_db, "Waveform database (built from the config if omitted)")->check(CLI::ExistingFile);

    // render
    auto* rend = cli.add_subcommand("render", "Render the view perceived while gazing at one object");
    std::string r_scene, r_schedule, r_masks, r_gaze, r_out = "out/render.png";
    bool r_linear16 = false;
    rend->add_option("-s,--scene", r_scene, "Scene JSON")->required()->check(CLI::ExistingFile);
    rend->add_option("--schedule", r_schedule, "schedule.json from plan")->required()->check(CLI::ExistingFile);
    rend->add_option("--masks", r_masks, "Mask directory (default: masks/ next to the schedule)");
    rend->add_option("-g,--gaze", r_gaze, "Gazed layer (default: the scene's gaze)");
    rend->add_option("-o,--out", r_out, "Output PNG; provenance goes to the same stem with .json");
    rend->add_flag("--linear16", r_linear16, "Write a 16-bit linear PNG instead of 8-bit sRGB");

    // dotgrid
    auto* dg = cli.add_subcommand("dotgrid", "Measure blur-circle radii of rendered dot grids");
    std::vector<double> dg_distances{500, 600, 700, 800, 900};
    std::vector<double> dg_powers{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5};
    std::string dg_out = "out/dotgrid.csv", dg_db;
    dg->add_option("--distances", dg_distances, "Grid distances (mm)")->delimiter(',');
    dg->add_option("--powers", dg_powers, "Lens powers (D)")->delimiter(',');
    dg->add_option("-o,--out", dg_out, "Output CSV");
    dg->add_option("--db", dg_db, "Waveform database (built from the config if omitted)")->check(CLI::ExistingFile);

    // seam-demo
    auto* seam = cli.add_subcommand("seam-demo", "Binary vs feathered masks for the eight seam conditions");
    std::string seam_out = "out/seams";
    seam->add_option("-o,--out", seam_out, "Output directory");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        const ProjectConfig config = config_from(config_path);
        if (*br) {
            cmd_blur_range(config, br_from, br_to, br_step, br_out);
        } else if (*db) {
            const fs::path out(db_out);
            if (out.has_parent_path()) ensure_dir(out.parent_path());
            make_db(config).save(out);
        } else if (*plan) {
            const SceneFile scene = load_scene(plan_scene_path);
            cmd_plan(config, scene, db_or_build(config, opt_path(plan_db)), plan_out);
        } else if (*rend) {
            const SceneFile scene = load_scene(r_scene);
            const IlluminationSchedule schedule = schedule_from_json(read_text(r_schedule));
            const fs::path masks_dir = r_masks.empty() ? fs::path(r_schedule).parent_path() / "masks" : fs::path(r_masks);
            cmd_render(config, scene, schedule, load_masks(masks_dir), r_gaze.empty() ? scene.gaze : r_gaze, r_out,
                       r_linear16);
        } else if (*dg) {
            cmd_dotgrid(config, dg_distances, dg_powers, db_or_build(config, opt_path(dg_db)), dg_out);
        } else if (*seam) {
            cmd_seam_demo(config, seam_out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
