#pragma once

// Tunable-lens drive waveforms and a synthetic response model.

#include <cstddef>
#include <span>
#include <vector>

namespace sweepfocus {

inline constexpr double kDriveVoltageLimit = 0.07; // V
inline constexpr double kSweepFrequency = 60.0;    // Hz

/// Sinusoidal drive between two voltages. Phase 0 is the voltage minimum:
/// v(t) = mid - half_span * cos(2 pi f t).
struct InputWave {
    double v_min = 0.0;
    double v_max = 0.0;
    double frequency = kSweepFrequency;

    double voltage_at(double t) const;
    bool operator==(const InputWave&) const = default;
};

/// Parameters of the synthetic lens response.
struct EtlModel {
    /// Static voltage-to-power gain: +-0.07 V maps to +-10 D.
    double gain = 0.01 / kDriveVoltageLimit; // mm^-1 per V
    /// First-order lag time constant (s).
    double time_constant = 1.5e-3;
    /// Second-harmonic distortion relative to the fundamental amplitude.
    double harmonic2 = 0.05;
    /// Target spacing of stored samples (s); the actual spacing divides the period evenly.
    double sample_spacing = 10e-6;

    bool operator==(const EtlModel&) const = default;
};

/// One period of lens power (mm^-1), sampled uniformly. Sample i sits at
/// time i * sample_period from the start of the drive period.
class OutputWaveform {
public:
    OutputWaveform() = default;
    OutputWaveform(std::vector<double> samples, double sample_period);

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double sample_period() const { return sample_period_; }
    double period() const { return sample_period_ * static_cast<double>(samples_.size()); }

    /// Periodic linear interpolation at time t (s).
    double power_at(double t) const;
    double min_power() const { return min_; }
    double max_power() const { return max_; }
    double range() const { return max_ - min_; }

private:
    std::vector<double> samples_;
    double sample_period_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

/// Number of samples stored per drive period for a given model.
std::size_t samples_per_period(const EtlModel& model, double frequency);

/// Periodic steady-state response of the lens to `wave`: the static map is
/// applied to the sinusoid plus a second-harmonic distortion term, and each
/// harmonic passes through the first-order lag with gain 1/sqrt(1+(n w tau)^2)
/// and phase delay atan(n w tau).
OutputWaveform synth_etl_response(const InputWave& wave, const EtlModel& model = {});

} // namespace sweepfocus
