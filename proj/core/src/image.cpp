#include "sweepfocus/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw ValidationError("image dimensions must be non-negative");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

double Image::get_or_zero(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return 0.0;
    return data_[index(x, y)];
}

double Image::bilinear(double u, double v) const {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    if (fu < -1.0 || fv < -1.0 || fu >= width_ || fv >= height_) return 0.0;
    const int x0 = static_cast<int>(fu);
    const int y0 = static_cast<int>(fv);
    const double ax = u - fu;
    const double ay = v - fv;
    const double top = (1.0 - ax) * get_or_zero(x0, y0) + ax * get_or_zero(x0 + 1, y0);
    const double bottom = (1.0 - ax) * get_or_zero(x0, y0 + 1) + ax * get_or_zero(x0 + 1, y0 + 1);
    return (1.0 - ay) * top + ay * bottom;
}

double Image::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

double Image::max() const {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

std::size_t Image::count_nonzero() const {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

Image& Image::operator+=(const Image& other) {
    if (other.width_ != width_ || other.height_ != height_) {
        throw ValidationError("image size mismatch in accumulation");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Image& Image::operator*=(double k) {
    for (auto& v : data_) v *= k;
    return *this;
}

Image multiply(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("image size mismatch in product");
    }
    Image out(a.width(), a.height());
    auto o = out.pixels();
    auto pa = a.pixels();
    auto pb = b.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = pa[i] * pb[i];
    return out;
}

Image resample_scaled(const Image& src, int width, int height, Vec2 dst_center, Vec2 src_center,
                      double scale) {
    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Vec2 p = scaled_source_coord({static_cast<double>(x), static_cast<double>(y)}, dst_center,
                                               src_center, scale);
            out.at(x, y) = src.bilinear(p.x, p.y);
        }
    }
    return out;
}

std::vector<std::uint8_t> quantize8(const Image& img) {
    std::vector<std::uint8_t> out(img.size());
    auto px = img.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = std::clamp(px[i], 0.0, 1.0);
        out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return out;
}

Image dequantize8(std::span<const std::uint8_t> bytes, int width, int height) {
    Image out(width, height);
    if (bytes.size() != out.size()) throw ValidationError("8-bit buffer size mismatch");
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = bytes[i] / 255.0;
    return out;
}

} // namespace sweepfocus
