#include <gtest/gtest.h>

#include <cmath>

#include "sweepfocus/dotgrid.hpp"
#include "sweepfocus/errors.hpp"
#include "sweepfocus/psf.hpp"

using namespace sweepfocus;

namespace {

DotGridSpec grid() {
    DotGridSpec g;
    g.center = {160, 160};
    g.spacing = 60;
    return g;
}

} // namespace

TEST(DotGrid, SharpSingleTexelDots) {
    const Image img = make_dot_grid(320, 320, grid());
    EXPECT_EQ(img.count_nonzero(), 25u);
    const auto dots = measure_dot_grid(img, grid());
    ASSERT_EQ(dots.size(), 9u);
    for (const auto& d : dots) EXPECT_NEAR(d.radius, 0.0, 0.5 + 1e-12);
    EXPECT_NEAR(dots[4].center.x, 160.0, 1e-9);
    EXPECT_NEAR(dots[0].center.y, 100.0, 1e-9);
}

TEST(DotGrid, SharpDiscDots) {
    const Image img = make_dot_grid(320, 320, grid(), 6.0);
    for (const auto& d : measure_dot_grid(img, grid())) EXPECT_NEAR(d.radius, 6.0, 0.5);
}

TEST(DotGrid, BlurredPointsRecoverKernelRadius) {
    for (double r : {3.0, 7.5, 12.0, 20.0}) {
        const Image img = convolve(make_dot_grid(320, 320, grid()), DiscKernel(2.0 * r));
        for (const auto& d : measure_dot_grid(img, grid())) EXPECT_NEAR(d.radius, r, 1.0) << r;
    }
}

TEST(DotGrid, CountMismatch) {
    Image img = make_dot_grid(320, 320, grid());
    img.at(5, 5) = 1.0;
    EXPECT_THROW(measure_dot_grid(img, grid()), DetectionError);
    EXPECT_THROW(measure_dot_grid(Image(10, 10), grid()), DetectionError);
}

TEST(Otsu, SeparatesTwoLevels) {
    Image img(10, 10, 0.1);
    for (int x = 0; x < 3; ++x) img.at(x, 0) = 0.9;
    const double t = otsu_threshold(img);
    EXPECT_GT(t, 0.1);
    EXPECT_LT(t, 0.9);
}

TEST(CircleFit, ExactOnCirclePoints) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 12; ++i) {
        const double a = i * 0.5;
        pts.push_back({3.0 + 7.0 * std::cos(a), -2.0 + 7.0 * std::sin(a)});
    }
    const Circle c = fit_circle(pts);
    EXPECT_NEAR(c.center.x, 3.0, 1e-9);
    EXPECT_NEAR(c.center.y, -2.0, 1e-9);
    EXPECT_NEAR(c.radius, 7.0, 1e-9);
}

TEST(ConnectedComponents, EightConnectivity) {
    Image img(6, 6);
    img.at(1, 1) = 1.0;
    img.at(2, 2) = 1.0; // diagonal neighbour joins
    img.at(4, 4) = 1.0;
    const auto comps = connected_components(img, 0.5);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0].size(), 2u);
}
