#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sweepfocus/errors.hpp"
#include "sweepfocus/etl.hpp"

using namespace sweepfocus;

TEST(Etl, SamplesPerPeriod) {
    EXPECT_EQ(samples_per_period(EtlModel{}, 60.0), 1667u);
    const auto out = synth_etl_response({-0.01, 0.02});
    EXPECT_EQ(out.size(), 1667u);
    EXPECT_NEAR(out.period(), 1.0 / 60.0, 1e-15);
}

TEST(Etl, ConstantDriveIsFlat) {
    for (double v : {-0.07, 0.0, 0.014, 0.07}) {
        const auto out = synth_etl_response({v, v});
        const double expected = v / 0.07 * 0.01;
        for (double p : out.samples()) EXPECT_NEAR(p, expected, 1e-15);
        EXPECT_DOUBLE_EQ(out.range(), 0.0);
    }
}

TEST(Etl, NoLagNoDistortionIsStaticMap) {
    EtlModel m;
    m.time_constant = 0.0;
    m.harmonic2 = 0.0;
    const InputWave w{-0.03, 0.05};
    const auto out = synth_etl_response(w, m);
    for (std::size_t i = 0; i < out.size(); i += 37) {
        EXPECT_NEAR(out.samples()[i], m.gain * w.voltage_at(i * out.sample_period()), 1e-15);
    }
}

TEST(Etl, FirstOrderLagGainAndPhase) {
    const EtlModel m;
    const InputWave w{-0.04, 0.04};
    const auto out = synth_etl_response(w, m);
    const double static_amp = m.gain * 0.04;
    const double wt = 2.0 * std::numbers::pi * 60.0 * m.time_constant;
    const auto h1 = oracle::harmonic(out.samples(), 1);
    EXPECT_NEAR(std::abs(h1), static_amp / std::sqrt(1.0 + wt * wt), 1e-12);
    EXPECT_LT(std::abs(h1), static_amp);
    // Input fundamental is -cos, i.e. phase pi; the lag adds a delay.
    const double delay = std::remainder(std::arg(-h1), 2.0 * std::numbers::pi);
    EXPECT_NEAR(-delay, std::atan(wt), 1e-9);
    EXPECT_GT(std::abs(delay), 0.1);
    const auto h2 = oracle::harmonic(out.samples(), 2);
    EXPECT_NEAR(std::abs(h2), m.harmonic2 * static_amp / std::sqrt(1.0 + 4.0 * wt * wt), 1e-12);
    EXPECT_NEAR(std::abs(oracle::harmonic(out.samples(), 3)), 0.0, 1e-12);
}

TEST(Etl, PowerAtInterpolatesPeriodically) {
    const OutputWaveform w({0.0, 1.0, 2.0, 3.0}, 0.25);
    EXPECT_DOUBLE_EQ(w.period(), 1.0);
    EXPECT_DOUBLE_EQ(w.power_at(0.125), 0.5);
    EXPECT_DOUBLE_EQ(w.power_at(0.875), 1.5); // between 3 and wrapped 0
    EXPECT_DOUBLE_EQ(w.power_at(1.25), 1.0);
    EXPECT_DOUBLE_EQ(w.power_at(-0.75), 1.0);
    EXPECT_DOUBLE_EQ(w.min_power(), 0.0);
    EXPECT_DOUBLE_EQ(w.max_power(), 3.0);
    EXPECT_THROW(OutputWaveform({}, 0.1), ValidationError);
    EXPECT_THROW(OutputWaveform({1.0}, 0.0), ValidationError);
}

TEST(Etl, DriveVoltage) {
    const InputWave w{-0.02, 0.06, 60.0};
    EXPECT_NEAR(w.voltage_at(0.0), -0.02, 1e-15);
    EXPECT_NEAR(w.voltage_at(1.0 / 120.0), 0.06, 1e-15);
}
