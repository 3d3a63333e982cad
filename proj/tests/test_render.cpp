#include <gtest/gtest.h>

#include "sweepfocus/errors.hpp"
#include "sweepfocus/psf.hpp"
#include "sweepfocus/render.hpp"
#include "sweepfocus/scaling.hpp"

using namespace sweepfocus;

namespace {

constexpr double kPpr = 1024.0;

Scene one_layer(double distance, const Image& texture) {
    Scene s;
    s.width = texture.width();
    s.height = texture.height();
    s.optical_center = {s.width / 2.0, s.height / 2.0};
    s.pixels_per_radian = kPpr;
    Layer l;
    l.name = "L";
    l.texture = texture;
    l.distance = distance;
    l.pitch = (distance + 15.0) / kPpr;
    l.axis_texel = s.optical_center;
    l.masks["all"] = Image(texture.width(), texture.height(), 1.0);
    s.layers.push_back(l);
    return s;
}

Image pattern(int w, int h) {
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) img.at(x, y) = ((x / 4 + y / 3) % 2) * 0.6 + 0.1;
    }
    return img;
}

IlluminationSchedule slots(std::vector<std::pair<double, std::int64_t>> power_and_start, std::string mask = "all") {
    IlluminationSchedule s;
    s.period = 1.0 / 60.0;
    int id = 0;
    for (auto [p, t] : power_and_start) s.slots.push_back({id++, p, t, t + 1000, t - 460, mask});
    return s;
}

} // namespace

TEST(Accommodate, Cases) {
    const EyeModel eye = EyeModel::standard();
    Scene s = one_layer(1e6, Image(4, 4, 1.0));
    EXPECT_NEAR(accommodate(s, 0, eye, 15.0).eye_power, eye.far_power, 1e-6);
    s.layers[0].distance = 500.0;
    const GazeState g = accommodate(s, 0, eye, 15.0);
    EXPECT_NEAR(g.eye_power, 1.0 / 515.0 + 0.06, 1e-15);
    EXPECT_FALSE(g.clamped);
    s.layers[0].distance = 60.0;
    const GazeState c = accommodate(s, 0, eye, 15.0);
    EXPECT_TRUE(c.clamped);
    EXPECT_DOUBLE_EQ(c.eye_power, eye.near_power);
    EXPECT_THROW(accommodate(s, 3, eye, 15.0), ValidationError);
}

TEST(PsfDiameter, ScalesWithPixelsPerRadian) {
    OpticalStack st;
    st.eye_power = 1.0 / 515.0 + 0.06;
    EXPECT_NEAR(psf_diameter_px(st, 500.0, 3000.0), 0.0, 1e-9);
    st.etl_power = 0.002;
    const double d = psf_diameter_px(st, 500.0, 3000.0);
    EXPECT_NEAR(d, blur_circle_diameter(st, 500.0) / (1000.0 / 60.0) * 3000.0, 1e-12);
    EXPECT_NEAR(d, 0.129455 * 0.06 * 3000.0, 1e-3);
    EXPECT_DOUBLE_EQ(psf_diameter_px(st, 500.0, 6000.0), 2.0 * d);
}

TEST(Render, IdentityForAFullPeriodUnpoweredSlot) {
    const Image tex = pattern(48, 40);
    const Scene s = one_layer(500.0, tex);
    IlluminationSchedule sched;
    sched.period = 1.0 / 60.0;
    sched.slots.push_back({0, 0.0, 0, 16666, -460, "all"});
    RenderOptions o;
    o.integrate_within_frame = false;
    const GazeState g = accommodate(s, 0, o.eye, o.vertex_distance);
    const RenderedView v = render(s, sched, nullptr, g, o);
    for (std::size_t i = 0; i < tex.size(); ++i) EXPECT_NEAR(v.image.pixels()[i], tex.pixels()[i], 1e-12);
    ASSERT_EQ(v.slots.size(), 1u);
    EXPECT_NEAR(v.slots[0].weight, 1.0, 1e-12);
    EXPECT_NEAR(v.slots[0].layers[0].psf_px, 0.0, 1e-9);
    EXPECT_EQ(v.slots[0].layers[0].scale, 1.0);
}

TEST(Render, ConservesFluxPerSlot) {
    Image tex(120, 120);
    for (int y = 40; y < 80; ++y) {
        for (int x = 40; x < 80; ++x) tex.at(x, y) = 0.3 + 0.005 * (x - y);
    }
    const Scene s = one_layer(700.0, tex);
    RenderOptions o;
    o.integrate_within_frame = false;
    o.auto_exposure = false;
    const GazeState g = accommodate(s, 0, o.eye, o.vertex_distance);
    const double p = 0.003;
    const auto sched = slots({{0.0, 0}, {p, 5000}});
    const RenderedView v = render(s, sched, nullptr, g, o);
    ASSERT_GT(v.slots[1].layers[0].psf_px, 5.0);
    const double scale = scaling_factor(700.0, 15.0, p).scale;
    const double texel_px = kPpr * s.layers[0].pitch / 715.0;
    const double expected = v.slots[0].weight * resample_scaled(tex, 120, 120, s.optical_center, s.optical_center, texel_px).sum() +
                            v.slots[1].weight * resample_scaled(tex, 120, 120, s.optical_center, s.optical_center, texel_px * scale).sum();
    EXPECT_NEAR(v.image.sum(), expected, 1e-6 * expected);
    EXPECT_NEAR(v.slots[0].weight + v.slots[1].weight, 2000.0 / (1e6 / 60.0), 1e-12);
}

TEST(Render, BlurMatchesDiscKernel) {
    Image tex(81, 81);
    tex.at(40, 40) = 1.0;
    const Scene s = one_layer(500.0, tex);
    RenderOptions o;
    o.integrate_within_frame = false;
    const GazeState g = accommodate(s, 0, o.eye, o.vertex_distance);
    const double p = 0.004;
    const RenderedView v = render(s, slots({{p, 0}}), nullptr, g, o);
    const double psf = v.slots[0].layers[0].psf_px;
    OpticalStack st;
    st.eye_power = g.eye_power;
    st.etl_power = p;
    EXPECT_NEAR(psf, psf_diameter_px(st, 500.0, kPpr), 1e-12);
    // Magnified by the lens, then spread by the disc kernel.
    const double s_p = scaling_factor(500.0, 15.0, p).scale;
    Image expected = convolve(resample_scaled(tex, 81, 81, s.optical_center, s.optical_center, s_p), DiscKernel(psf));
    expected *= v.slots[0].weight;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        ASSERT_NEAR(v.image.pixels()[i], expected.pixels()[i], 1e-12) << i;
    }
    EXPECT_GT(v.image.count_nonzero(), DiscKernel(psf).nonzero());
}

TEST(Render, IntegrationAveragesSubsamples) {
    const Image tex = pattern(64, 64);
    const Scene s = one_layer(600.0, tex);
    RenderOptions o;
    const GazeState g = accommodate(s, 0, o.eye, o.vertex_distance);
    const auto wf = synth_etl_response({0.0, 0.04});
    const auto sched = slots({{wf.power_at(0.0045), 4000}});
    const RenderedView v = render(s, sched, &wf, g, o);
    ASSERT_EQ(v.slots[0].powers.size(), 8u);
    EXPECT_DOUBLE_EQ(v.slots[0].powers[0], wf.power_at(4062.5e-6));
    // A lens held still collapses to a single exposure.
    const OutputWaveform held(std::vector<double>(wf.size(), 0.002), wf.sample_period());
    EXPECT_EQ(render(s, sched, &held, g, o).slots[0].powers.size(), 1u);
}

TEST(Render, Errors) {
    const Scene s = one_layer(500.0, pattern(32, 32));
    RenderOptions o;
    const GazeState g = accommodate(s, 0, o.eye, o.vertex_distance);
    EXPECT_THROW(render(s, slots({{0.0, 0}}, "missing"), nullptr, g, RenderOptions{.integrate_within_frame = false}),
                 ValidationError);
    EXPECT_THROW(render(s, slots({{0.0, 0}}), nullptr, g, o), ValidationError); // needs the waveform
    o.integrate_within_frame = false;
    EXPECT_THROW(render(s, slots({{0.01, 0}}), nullptr, g, o), DomainError); // kernel exceeds the canvas
    Scene unsorted = s;
    unsorted.layers.push_back(s.layers[0]);
    unsorted.layers[1].distance = 100.0;
    EXPECT_THROW(unsorted.validate(), ValidationError);
}
