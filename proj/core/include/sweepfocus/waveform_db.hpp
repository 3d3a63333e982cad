#pragma once

// Database of lens responses for every (v_min, v_max) drive combination and
// the narrowest-range search used to pick a drive wave for a target sweep.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sweepfocus/etl.hpp"

namespace sweepfocus {

/// Voltage grid v_i = start + i * step, i = 0..count-1.
struct VoltageGrid {
    double start = -kDriveVoltageLimit;
    double step = 0.002;
    std::size_t count = 71;

    double value(std::size_t i) const { return start + static_cast<double>(i) * step; }
    bool operator==(const VoltageGrid&) const = default;
};

struct WaveformEntry {
    InputWave wave;
    OutputWaveform output;
};

class WaveformDb {
public:
    WaveformDb() = default;
    WaveformDb(VoltageGrid grid, EtlModel model, double frequency, std::vector<WaveformEntry> entries);

    const VoltageGrid& grid() const { return grid_; }
    const EtlModel& model() const { return model_; }
    double frequency() const { return frequency_; }
    const std::vector<WaveformEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Binary format, all little-endian:
    ///   char[8]  magic "SFWAVEDB"
    ///   u32      version (1)
    ///   f64 grid.start, f64 grid.step, u64 grid.count
    ///   f64 frequency, u64 samples_per_period, f64 sample_period
    ///   f64 model.gain, f64 model.time_constant, f64 model.harmonic2, f64 model.sample_spacing
    ///   u64 entry_count
    ///   entry_count x { f64 v_min, f64 v_max, samples_per_period x f64 power (mm^-1) }
    void write(std::ostream& out) const;
    static WaveformDb read(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static WaveformDb load(const std::filesystem::path& path);

private:
    VoltageGrid grid_;
    EtlModel model_;
    double frequency_ = kSweepFrequency;
    std::vector<WaveformEntry> entries_;
};

/// One entry per unordered grid pair with v_min <= v_max, ordered by
/// (v_min index, v_max index).
WaveformDb build_db(const VoltageGrid& grid = {}, const EtlModel& model = {},
                    double frequency = kSweepFrequency);

/// Entry whose output range covers [p_low, p_high] with the smallest output
/// range; ties go to the smaller voltage span, then to (v_min, v_max).
/// Throws RangeUnachievable if nothing covers the target.
const WaveformEntry& select_wave(const WaveformDb& db, double p_low, double p_high);

} // namespace sweepfocus
