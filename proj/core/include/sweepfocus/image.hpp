#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sweepfocus {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

/// Single-channel image of linear-light values. Pixel (x, y) has its centre
/// at continuous coordinate (x, y).
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    double& at(int x, int y) { return data_[index(x, y)]; }
    double at(int x, int y) const { return data_[index(x, y)]; }
    double get_or_zero(int x, int y) const;

    std::span<double> pixels() { return data_; }
    std::span<const double> pixels() const { return data_; }

    /// Bilinear interpolation, zero outside the raster.
    double bilinear(double u, double v) const;

    double sum() const;
    double max() const;
    std::size_t count_nonzero() const;

    Image& operator+=(const Image& other);
    Image& operator*=(double k);
    bool operator==(const Image&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

Image multiply(const Image& a, const Image& b);

/// Source coordinate seen at destination pixel `dst` when the source is
/// magnified by `scale` about `src_center`, which lands on `dst_center`.
inline Vec2 scaled_source_coord(Vec2 dst, Vec2 dst_center, Vec2 src_center, double scale) {
    return {src_center.x + (dst.x - dst_center.x) / scale, src_center.y + (dst.y - dst_center.y) / scale};
}

/// Resamples `src` onto a width x height raster under the magnification above.
Image resample_scaled(const Image& src, int width, int height, Vec2 dst_center, Vec2 src_center,
                      double scale);

/// 8-bit quantization of values clamped to [0, 1].
std::vector<std::uint8_t> quantize8(const Image& img);
Image dequantize8(std::span<const std::uint8_t> bytes, int width, int height);

} // namespace sweepfocus
