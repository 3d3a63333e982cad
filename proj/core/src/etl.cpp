#include "sweepfocus/etl.hpp"

#include <algorithm>
#include <cmath>

#include "sweepfocus/errors.hpp"
#include "sweepfocus/units.hpp"

namespace sweepfocus {

double InputWave::voltage_at(double t) const {
    const double mid = 0.5 * (v_min + v_max);
    const double half = 0.5 * (v_max - v_min);
    return mid - half * std::cos(2.0 * kPi * frequency * t);
}

OutputWaveform::OutputWaveform(std::vector<double> samples, double sample_period)
    : samples_(std::move(samples)), sample_period_(sample_period) {
    if (samples_.empty() || !(sample_period_ > 0.0)) {
        throw ValidationError("output waveform needs samples and a positive sample period");
    }
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    min_ = *lo;
    max_ = *hi;
}

double OutputWaveform::power_at(double t) const {
    const double n = static_cast<double>(samples_.size());
    double pos = std::fmod(t / sample_period_, n);
    if (pos < 0.0) pos += n;
    auto i0 = static_cast<std::size_t>(pos);
    if (i0 >= samples_.size()) i0 = samples_.size() - 1;
    const std::size_t i1 = (i0 + 1) % samples_.size();
    const double frac = pos - static_cast<double>(i0);
    return samples_[i0] + frac * (samples_[i1] - samples_[i0]);
}

std::size_t samples_per_period(const EtlModel& model, double frequency) {
    const double n = std::round(1.0 / (frequency * model.sample_spacing));
    return static_cast<std::size_t>(std::max(2.0, n));
}

OutputWaveform synth_etl_response(const InputWave& wave, const EtlModel& model) {
    const std::size_t n = samples_per_period(model, wave.frequency);
    const double period = 1.0 / wave.frequency;
    const double dt = period / static_cast<double>(n);

    const double omega = 2.0 * kPi * wave.frequency;
    const double dc = model.gain * 0.5 * (wave.v_min + wave.v_max);
    const double amp1 = model.gain * 0.5 * (wave.v_max - wave.v_min);
    const double amp2 = model.harmonic2 * amp1;

    const auto lag = [&](double harmonic, double& gain, double& phase) {
        const double wt = harmonic * omega * model.time_constant;
        gain = 1.0 / std::sqrt(1.0 + wt * wt);
        phase = std::atan(wt);
    };
    double g1 = 1.0, ph1 = 0.0, g2 = 1.0, ph2 = 0.0;
    lag(1.0, g1, ph1);
    lag(2.0, g2, ph2);

    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = omega * (static_cast<double>(i) * dt);
        samples[i] = dc - amp1 * g1 * std::cos(theta - ph1) + amp2 * g2 * std::cos(2.0 * theta - ph2);
    }
    return OutputWaveform(std::move(samples), dt);
}

} // namespace sweepfocus
