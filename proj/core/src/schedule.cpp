#include "sweepfocus/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sweepfocus/blur_range.hpp"
#include "sweepfocus/errors.hpp"

namespace sweepfocus {

using nlohmann::json;

std::string_view to_string(RegionLabel label) {
    return label == RegionLabel::Blur ? "blur" : "focus";
}

RegionLabel parse_region_label(std::string_view text) {
    if (text == "blur") return RegionLabel::Blur;
    if (text == "focus") return RegionLabel::Focus;
    throw ValidationError("unknown region label '" + std::string(text) + "' (expected focus or blur)");
}

std::vector<TimeInterval> phase_windows(const OutputWaveform& waveform, double target_power,
                                        double tol) {
    if (!(tol >= 0.0)) throw DomainError("phase_windows: tolerance must be non-negative");
    const auto samples = waveform.samples();
    const std::size_t n = samples.size();
    const double dt = waveform.sample_period();

    std::vector<char> inside(n);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        inside[i] = std::abs(samples[i] - target_power) <= tol;
        count += inside[i] ? 1 : 0;
    }
    if (count == 0) return {};
    if (count == n) return {{0.0, waveform.period()}};

    // Start scanning at the beginning of a run so wrapped runs stay whole.
    std::size_t first = 0;
    while (!(inside[first] && !inside[(first + n - 1) % n])) ++first;

    std::vector<TimeInterval> windows;
    std::size_t k = 0;
    while (k < n) {
        const std::size_t i = (first + k) % n;
        if (!inside[i]) {
            ++k;
            continue;
        }
        std::size_t len = 0;
        while (k + len < n && inside[(first + k + len) % n]) ++len;
        const double start = static_cast<double>(i) * dt;
        windows.push_back({start, start + static_cast<double>(len - 1) * dt});
        k += len;
    }
    std::sort(windows.begin(), windows.end(),
              [](const TimeInterval& a, const TimeInterval& b) { return a.start < b.start; });
    return windows;
}

SweepPlan plan_sweep(std::span<const PlanObject> objects, const EyeModel& eye, double vertex_distance,
                     double alpha, const WaveformDb& db) {
    if (!(alpha >= 0.0)) throw ValidationError("plan_sweep: alpha must be non-negative");
    bool any_blur = false;
    double p_s = 0.0;
    for (const auto& obj : objects) {
        if (obj.label != RegionLabel::Blur) continue;
        any_blur = true;
        p_s = std::max(p_s, min_blur_power(eye, vertex_distance, obj.distance));
    }
    if (!any_blur) throw ValidationError("nothing to blur: no object is labeled blur");

    SweepPlan plan;
    plan.p_low = 0.0;
    plan.p_s = p_s;
    plan.alpha = alpha;
    plan.p_high = p_s + alpha;
    plan.chosen_wave = select_wave(db, plan.p_low, plan.p_high).wave;
    return plan;
}

namespace {

struct Candidate {
    std::int64_t mid_us;
    double excursion;
};

bool in_windows(double t, double period, std::span<const TimeInterval> windows) {
    for (const auto& w : windows) {
        if ((t >= w.start && t <= w.end) || (t + period >= w.start && t + period <= w.end)) return true;
    }
    return false;
}

std::vector<Candidate> frame_candidates(const OutputWaveform& wf, double target, const ScheduleOptions& opt,
                                        std::span<const TimeInterval> windows) {
    const double period = wf.period();
    const std::int64_t half = opt.frame_us / 2;
    const auto last_mid = static_cast<std::int64_t>(std::floor(period * 1e6)) - (opt.frame_us - half);

    std::vector<Candidate> out;
    for (std::int64_t m = half; m <= last_mid; ++m) {
        const double t = static_cast<double>(m) * 1e-6;
        if (!in_windows(t, period, windows)) continue;
        if (std::abs(wf.power_at(t) - target) > opt.tolerance) continue;
        double excursion = 0.0;
        constexpr int kProbe = 8;
        for (int j = 0; j <= kProbe; ++j) {
            const double tj = (static_cast<double>(m - half) +
                               static_cast<double>(opt.frame_us) * j / kProbe) * 1e-6;
            excursion = std::max(excursion, std::abs(wf.power_at(tj) - target));
        }
        out.push_back({m, excursion});
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.excursion != b.excursion) return a.excursion < b.excursion;
        return a.mid_us < b.mid_us;
    });
    return out;
}

} // namespace

IlluminationSchedule schedule_targets(const OutputWaveform& waveform, const InputWave& wave,
                                      std::span<const ScheduleTarget> targets,
                                      const ScheduleOptions& options) {
    if (options.frame_us <= 0 || options.trigger_delay_us < 0 || options.frames_per_target < 0) {
        throw ValidationError("schedule options: frame length, delay and frame count must be valid");
    }
    if (targets.empty()) throw ValidationError("schedule: no targets");

    std::vector<std::vector<Candidate>> candidates;
    for (const auto& target : targets) {
        if (target.mask_ids.empty()) throw ValidationError("schedule: target without masks");
        const auto windows = phase_windows(waveform, target.power, options.tolerance);
        if (windows.empty()) {
            std::ostringstream msg;
            msg << "waveform never comes within " << inv_mm_to_diopters(options.tolerance) << " D of "
                << inv_mm_to_diopters(target.power) << " D";
            throw RangeUnachievable(msg.str());
        }
        auto c = frame_candidates(waveform, target.power, options, windows);
        if (c.empty()) {
            std::ostringstream msg;
            msg << "window too narrow: no " << options.frame_us << " us frame can be centred within "
                << inv_mm_to_diopters(options.tolerance) << " D of " << inv_mm_to_diopters(target.power)
                << " D; widen the tolerance or use a staircase drive";
            throw WindowTooNarrow(msg.str());
        }
        candidates.push_back(std::move(c));
    }

    std::vector<std::int64_t> taken;
    const auto free_at = [&](std::int64_t mid) {
        return std::all_of(taken.begin(), taken.end(),
                           [&](std::int64_t t) { return std::abs(t - mid) >= options.frame_us; });
    };

    struct Pick {
        std::size_t target;
        std::int64_t mid_us;
        std::string mask_id;
    };
    std::vector<Pick> picks;
    const int rounds = options.frames_per_target == 0 ? 1 << 20 : options.frames_per_target;
    for (int round = 0; round < rounds; ++round) {
        std::vector<Pick> this_round;
        bool complete = true;
        for (std::size_t ti = 0; ti < targets.size() && complete; ++ti) {
            for (const auto& mask : targets[ti].mask_ids) {
                const auto it = std::find_if(candidates[ti].begin(), candidates[ti].end(),
                                             [&](const Candidate& c) { return free_at(c.mid_us); });
                if (it == candidates[ti].end()) {
                    complete = false;
                    break;
                }
                taken.push_back(it->mid_us);
                this_round.push_back({ti, it->mid_us, mask});
            }
        }
        if (!complete) {
            if (round == 0) {
                throw WindowTooNarrow("window too narrow: targets compete for the same projector frames");
            }
            break;
        }
        picks.insert(picks.end(), this_round.begin(), this_round.end());
    }

    std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return a.mid_us < b.mid_us; });

    IlluminationSchedule schedule;
    schedule.frame_us = options.frame_us;
    schedule.trigger_delay_us = options.trigger_delay_us;
    schedule.period = waveform.period();
    schedule.wave = wave;
    const std::int64_t half = options.frame_us / 2;
    int id = 0;
    for (const auto& p : picks) {
        Slot slot;
        slot.slot_id = id++;
        slot.target_power = targets[p.target].power;
        slot.t_start_us = p.mid_us - half;
        slot.t_end_us = slot.t_start_us + options.frame_us;
        slot.trigger_us = slot.t_start_us - options.trigger_delay_us;
        slot.mask_id = p.mask_id;
        schedule.slots.push_back(std::move(slot));
    }
    return schedule;
}

IlluminationSchedule build_schedule(const SweepPlan& plan, const OutputWaveform& waveform,
                                    std::vector<std::string> focus_masks,
                                    std::vector<std::string> blur_masks,
                                    const ScheduleOptions& options) {
    const std::vector<ScheduleTarget> targets{{plan.p_low, std::move(focus_masks)},
                                              {plan.p_high, std::move(blur_masks)}};
    return schedule_targets(waveform, plan.chosen_wave, targets, options);
}

std::vector<std::string> check_schedule(const IlluminationSchedule& schedule,
                                        const OutputWaveform& waveform, double tol) {
    std::vector<std::string> problems;
    const double period_us = schedule.period * 1e6;
    for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
        const auto& s = schedule.slots[i];
        std::ostringstream who;
        who << "slot " << s.slot_id << ": ";
        if (s.t_end_us - s.t_start_us != schedule.frame_us) {
            problems.push_back(who.str() + "not exactly one projector frame");
        }
        if (s.t_start_us < 0 || static_cast<double>(s.t_end_us) > period_us) {
            problems.push_back(who.str() + "outside the sweep period");
        }
        if (s.t_start_us - s.trigger_us != schedule.trigger_delay_us) {
            problems.push_back(who.str() + "trigger lead differs from the projector delay");
        }
        const double err = std::abs(waveform.power_at(s.mid_time()) - s.target_power);
        if (!(err <= tol)) {
            std::ostringstream msg;
            msg << who.str() << "mid-frame power off by " << inv_mm_to_diopters(err) << " D";
            problems.push_back(msg.str());
        }
        for (std::size_t j = i + 1; j < schedule.slots.size(); ++j) {
            const auto& o = schedule.slots[j];
            if (s.t_start_us < o.t_end_us && o.t_start_us < s.t_end_us) {
                std::ostringstream msg;
                msg << who.str() << "overlaps slot " << o.slot_id;
                problems.push_back(msg.str());
            }
        }
    }
    return problems;
}

namespace {

json wave_json(const InputWave& w) {
    return {{"v_min", w.v_min}, {"v_max", w.v_max}, {"frequency_hz", w.frequency}};
}

InputWave wave_from(const json& j) {
    InputWave w;
    w.v_min = j.at("v_min").get<double>();
    w.v_max = j.at("v_max").get<double>();
    w.frequency = j.at("frequency_hz").get<double>();
    return w;
}

template <class Fn>
auto parse_guarded(std::string_view what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string schedule_to_json(const IlluminationSchedule& schedule) {
    json slots = json::array();
    for (const auto& s : schedule.slots) {
        slots.push_back({{"slot_id", s.slot_id},
                         {"target_power_D", inv_mm_to_diopters(s.target_power)},
                         {"target_power_mm_inv", s.target_power},
                         {"t_start_us", s.t_start_us},
                         {"t_end_us", s.t_end_us},
                         {"trigger_us", s.trigger_us},
                         {"mask_id", s.mask_id}});
    }
    const json doc{{"version", 1},
                   {"kind", "illumination_schedule"},
                   {"period_s", schedule.period},
                   {"frame_us", schedule.frame_us},
                   {"trigger_delay_us", schedule.trigger_delay_us},
                   {"wave", wave_json(schedule.wave)},
                   {"slots", slots}};
    return doc.dump(2) + "\n";
}

IlluminationSchedule schedule_from_json(std::string_view text) {
    return parse_guarded("schedule", [&] {
        const json doc = json::parse(text);
        if (doc.at("version").get<int>() != 1) throw ValidationError("schedule: unsupported version");
        IlluminationSchedule s;
        s.period = doc.at("period_s").get<double>();
        s.frame_us = doc.at("frame_us").get<std::int64_t>();
        s.trigger_delay_us = doc.at("trigger_delay_us").get<std::int64_t>();
        s.wave = wave_from(doc.at("wave"));
        for (const auto& j : doc.at("slots")) {
            Slot slot;
            slot.slot_id = j.at("slot_id").get<int>();
            slot.target_power = j.at("target_power_mm_inv").get<double>();
            slot.t_start_us = j.at("t_start_us").get<std::int64_t>();
            slot.t_end_us = j.at("t_end_us").get<std::int64_t>();
            slot.trigger_us = j.at("trigger_us").get<std::int64_t>();
            slot.mask_id = j.at("mask_id").get<std::string>();
            s.slots.push_back(std::move(slot));
        }
        return s;
    });
}

std::string plan_to_json(const SweepPlan& plan) {
    const json doc{{"version", 1},
                   {"kind", "sweep_plan"},
                   {"p_low_D", inv_mm_to_diopters(plan.p_low)},
                   {"p_high_D", inv_mm_to_diopters(plan.p_high)},
                   {"p_s_D", inv_mm_to_diopters(plan.p_s)},
                   {"alpha_D", inv_mm_to_diopters(plan.alpha)},
                   {"p_low_mm_inv", plan.p_low},
                   {"p_high_mm_inv", plan.p_high},
                   {"p_s_mm_inv", plan.p_s},
                   {"alpha_mm_inv", plan.alpha},
                   {"wave", wave_json(plan.chosen_wave)}};
    return doc.dump(2) + "\n";
}

SweepPlan plan_from_json(std::string_view text) {
    return parse_guarded("sweep plan", [&] {
        const json doc = json::parse(text);
        if (doc.at("version").get<int>() != 1) throw ValidationError("sweep plan: unsupported version");
        SweepPlan p;
        p.p_low = doc.at("p_low_mm_inv").get<double>();
        p.p_high = doc.at("p_high_mm_inv").get<double>();
        p.p_s = doc.at("p_s_mm_inv").get<double>();
        p.alpha = doc.at("alpha_mm_inv").get<double>();
        p.chosen_wave = wave_from(doc.at("wave"));
        return p;
    });
}

} // namespace sweepfocus
