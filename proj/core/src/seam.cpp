#include "sweepfocus/seam.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

namespace {

void check_inputs(const RegionMask& mask, double scale) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) throw DomainError("seam: scale must be >= 1");
    const auto& w = mask.weights;
    if (w.empty()) throw ValidationError("seam: empty mask");
    const Vec2 c = mask.optical_center;
    if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw DomainError("seam: optical centre must be finite");
}

Image apparent(const Image& projector, Vec2 center, double scale) {
    return resample_scaled(projector, projector.width(), projector.height(), center, center, scale);
}

} // namespace

Image RegionMask::blur_region() const {
    if (label == RegionLabel::Blur) return weights;
    Image out(weights.width(), weights.height());
    auto o = out.pixels();
    auto w = weights.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = 1.0 - w[i];
    return out;
}

SeamRegion seam_region(const RegionMask& mask, double scale) {
    check_inputs(mask, scale);
    const Image blur = mask.blur_region();
    const Image scaled = apparent(blur, mask.optical_center, scale);
    SeamRegion seam{Image(blur.width(), blur.height()), Image(blur.width(), blur.height())};
    for (int y = 0; y < blur.height(); ++y) {
        for (int x = 0; x < blur.width(); ++x) {
            const bool in_blur = blur.at(x, y) >= 0.5;
            const bool in_scaled = scaled.at(x, y) >= 0.5;
            if (in_blur && !in_scaled) seam.gap.at(x, y) = 1.0;
            if (in_scaled && !in_blur) seam.overlap.at(x, y) = 1.0;
        }
    }
    return seam;
}

BlendPair binary_pair(const RegionMask& mask, double scale) {
    check_inputs(mask, scale);
    BlendPair pair;
    pair.optical_center = mask.optical_center;
    pair.scale = scale;
    pair.blur_projector = mask.blur_region();
    for (auto& v : pair.blur_projector.pixels()) v = v >= 0.5 ? 1.0 : 0.0;
    pair.focus = Image(pair.blur_projector.width(), pair.blur_projector.height());
    auto f = pair.focus.pixels();
    auto b = pair.blur_projector.pixels();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 - b[i];
    pair.blur_apparent = apparent(pair.blur_projector, pair.optical_center, scale);
    return pair;
}

BlendPair feather(const RegionMask& mask, double scale) {
    check_inputs(mask, scale);
    const Image blur = mask.blur_region();
    const Vec2 c = mask.optical_center;
    const int width = blur.width();
    const int height = blur.height();

    // A projector pixel at radius t lies in a seam pre-image iff the blur
    // region has an edge at some radius e in [t, s t] along the same ray;
    // the band [e/s, e] maps onto the apparent band [e, s e].
    Image projector(width, height);
    std::vector<double> level;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - c.x;
            const double dy = y - c.y;
            const double t = std::hypot(dx, dy);
            const double own = blur.at(x, y);
            const double reach = (scale - 1.0) * t;
            if (t == 0.0 || reach <= 0.0) {
                projector.at(x, y) = own;
                continue;
            }
            const double ux = dx / t;
            const double uy = dy / t;
            const int steps = static_cast<int>(std::ceil(reach * 4.0)) + 1;
            level.resize(static_cast<std::size_t>(steps) + 1);
            int crossings = 0;
            int crossing_at = -1;
            int above = 0;
            for (int k = 0; k <= steps; ++k) {
                const double r = t + reach * k / steps;
                level[k] = blur.bilinear(c.x + ux * r, c.y + uy * r) - 0.5;
                above += level[k] > 0.0 ? 1 : 0;
                if (k > 0 && (level[k - 1] > 0.0) != (level[k] > 0.0)) {
                    ++crossings;
                    crossing_at = k - 1;
                }
            }
            if (crossings == 0) {
                projector.at(x, y) = own;
            } else if (crossings == 1) {
                const int k = crossing_at;
                const double r0 = t + reach * k / steps;
                const double r1 = t + reach * (k + 1) / steps;
                const double e = r0 + (r1 - r0) * level[k] / (level[k] - level[k + 1]);
                const double inner = level[k] > 0.0 ? 1.0 : 0.0;
                const double outer = 1.0 - inner;
                const double lo = e / scale;
                const double w = (outer * (t - lo) + inner * (e - t)) / (e - lo);
                projector.at(x, y) = std::clamp(w, 0.0, 1.0);
            } else {
                // Several edges within one band width: fall back to coverage.
                projector.at(x, y) = static_cast<double>(above) / (steps + 1);
            }
        }
    }

    BlendPair pair;
    pair.optical_center = c;
    pair.scale = scale;
    pair.blur_apparent = apparent(projector, c, scale);
    pair.blur_projector = std::move(projector);
    pair.focus = Image(width, height);
    auto f = pair.focus.pixels();
    auto a = pair.blur_apparent.pixels();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::clamp(1.0 - a[i], 0.0, 1.0);
    return pair;
}

} // namespace sweepfocus
