#pragma once

// Uniform disc point-spread functions and their convolution with images.

#include <vector>

#include "sweepfocus/image.hpp"

namespace sweepfocus {

/// Normalized disc kernel of a given diameter in pixels, rasterized with
/// 4x4 supersampling per pixel. Diameters too small to cover any
/// subsample collapse to a unit impulse.
class DiscKernel {
public:
    explicit DiscKernel(double diameter_px);

    double diameter() const { return diameter_; }
    int radius() const { return radius_; } ///< half-extent in whole pixels
    bool is_impulse() const { return radius_ == 0; }
    double weight(int dx, int dy) const;
    double sum() const;
    std::size_t nonzero() const { return taps_; }

    /// Horizontal runs of equal weight: row offset dy, columns [dx0, dx1].
    struct Run {
        int dy;
        int dx0;
        int dx1;
        double weight;
    };
    const std::vector<Run>& runs() const { return runs_; }

private:
    double diameter_;
    int radius_ = 0;
    std::size_t taps_ = 1;
    std::vector<double> weights_; // (2r+1)^2, row-major
    std::vector<Run> runs_;
};

/// Zero-padded convolution. Exact impulse kernels return the input
/// unchanged; sparse inputs are splatted, dense ones use per-row prefix sums.
Image convolve(const Image& src, const DiscKernel& kernel);

} // namespace sweepfocus
