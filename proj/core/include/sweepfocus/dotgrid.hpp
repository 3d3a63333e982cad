#pragma once

// Blur-circle size measurement on images of a projected dot grid.

#include <span>
#include <vector>

#include "sweepfocus/image.hpp"

namespace sweepfocus {

struct DotGridSpec {
    int rows = 5;
    int cols = 5;
    double spacing = 96.0; ///< px between neighbouring dots
    Vec2 center;           ///< position of the grid centre
};

/// Grid of single-pixel dots (dot_radius <= 0) or antialiased discs.
Image make_dot_grid(int width, int height, const DotGridSpec& spec, double dot_radius = 0.0,
                    double level = 1.0);

/// Threshold maximizing the between-class variance of a 256-bin histogram
/// of values scaled to [0, max]. Returned in image units.
double otsu_threshold(const Image& img);

struct Component {
    std::vector<int> xs;
    std::vector<int> ys;
    Vec2 centroid() const;
    std::size_t size() const { return xs.size(); }
};

/// 8-connected components of pixels strictly above `threshold`.
std::vector<Component> connected_components(const Image& img, double threshold);

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

/// Algebraic least-squares circle through the points (Kasa fit).
Circle fit_circle(std::span<const Vec2> points);

/// Boundary samples of a component: midpoints between each member pixel and
/// its 4-neighbours outside the component.
std::vector<Vec2> boundary_points(const Component& component);

struct DotMeasurement {
    Vec2 center;
    double radius = 0.0;
};

/// Otsu binarization, connected components, the 3x3 dots closest to the
/// grid centre and a circle fit per dot. Throws DetectionError if the
/// number of components differs from rows * cols.
std::vector<DotMeasurement> measure_dot_grid(const Image& img, const DotGridSpec& expected);

} // namespace sweepfocus
