#pragma once

// Focal-sweep planning and projector illumination scheduling.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sweepfocus/etl.hpp"
#include "sweepfocus/optics.hpp"
#include "sweepfocus/units.hpp"
#include "sweepfocus/waveform_db.hpp"

namespace sweepfocus {

enum class RegionLabel { Focus, Blur };

std::string_view to_string(RegionLabel label);
RegionLabel parse_region_label(std::string_view text);

/// Closed time interval within one drive period (s). `end` may exceed the
/// period when the interval wraps around the period boundary.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;
    double length() const { return end - start; }
};

/// Maximal runs of samples with |power - target| <= tol, merged across the
/// period boundary. A waveform that stays within tolerance throughout yields
/// the single interval [0, period].
std::vector<TimeInterval> phase_windows(const OutputWaveform& waveform, double target_power,
                                        double tol);

/// An object the sweep has to serve, at a known distance from the lens.
struct PlanObject {
    std::string name;
    double distance = 0.0; ///< d_oE (mm)
    RegionLabel label = RegionLabel::Focus;
};

inline constexpr double kDefaultAlpha = diopters_to_inv_mm(0.2);

struct SweepPlan {
    double p_low = 0.0;  ///< mm^-1
    double p_high = 0.0; ///< P_E^s + alpha (mm^-1)
    double alpha = kDefaultAlpha;
    double p_s = 0.0;    ///< largest per-object minimum blur power (mm^-1)
    InputWave chosen_wave;
};

/// P_E^s is the largest min_blur_power over blur-labeled objects; the sweep
/// covers [0, P_E^s + alpha] with the narrowest database wave.
/// Throws ValidationError when nothing is labeled blur.
SweepPlan plan_sweep(std::span<const PlanObject> objects, const EyeModel& eye, double vertex_distance,
                     double alpha, const WaveformDb& db);

struct ScheduleOptions {
    std::int64_t frame_us = 1000;        ///< one projector frame at 1000 fps
    std::int64_t trigger_delay_us = 460; ///< trigger-to-light latency of the projector
    double tolerance = diopters_to_inv_mm(0.05);
    /// Frames per mask per target in each period. Zero packs as many as every target can equally fit.
    int frames_per_target = 1;
};

struct Slot {
    int slot_id = 0;
    double target_power = 0.0; ///< mm^-1
    std::int64_t t_start_us = 0;
    std::int64_t t_end_us = 0;
    std::int64_t trigger_us = 0; ///< t_start_us - trigger delay; negative means the previous period
    std::string mask_id;

    double mid_time() const { return 0.5e-6 * static_cast<double>(t_start_us + t_end_us); }
    bool operator==(const Slot&) const = default;
};

struct IlluminationSchedule {
    std::vector<Slot> slots; ///< ordered by start time
    std::int64_t frame_us = 1000;
    std::int64_t trigger_delay_us = 460;
    double period = 1.0 / kSweepFrequency; ///< s
    InputWave wave;

    bool operator==(const IlluminationSchedule&) const = default;
};

struct ScheduleTarget {
    double power = 0.0; ///< mm^-1
    std::vector<std::string> mask_ids;
};

/// Places whole projector frames whose mid-frame power is within tolerance
/// of each target. Among admissible frames the one with the smallest power
/// excursion over its duration is preferred. Targets take turns so every
/// target receives the same number of frames.
/// Throws RangeUnachievable if the waveform never reaches a target and
/// WindowTooNarrow if no frame can be centred in any of its windows.
IlluminationSchedule schedule_targets(const OutputWaveform& waveform, const InputWave& wave,
                                      std::span<const ScheduleTarget> targets,
                                      const ScheduleOptions& options = {});

/// Focus masks at power 0 and blur masks at the top of the sweep.
IlluminationSchedule build_schedule(const SweepPlan& plan, const OutputWaveform& waveform,
                                    std::vector<std::string> focus_masks,
                                    std::vector<std::string> blur_masks,
                                    const ScheduleOptions& options = {});

/// Human-readable violations of the schedule invariants (empty if valid):
/// whole frames, disjoint slots inside the period, exact trigger lead and
/// mid-frame power within `tol`.
std::vector<std::string> check_schedule(const IlluminationSchedule& schedule,
                                        const OutputWaveform& waveform, double tol);

/// JSON documents. Times are integer microseconds, powers are written both
/// in diopters and in exact mm^-1.
std::string schedule_to_json(const IlluminationSchedule& schedule);
IlluminationSchedule schedule_from_json(std::string_view text);
std::string plan_to_json(const SweepPlan& plan);
SweepPlan plan_from_json(std::string_view text);

} // namespace sweepfocus
