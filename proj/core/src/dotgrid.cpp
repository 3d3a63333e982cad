#include "sweepfocus/dotgrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

Image make_dot_grid(int width, int height, const DotGridSpec& spec, double dot_radius, double level) {
    Image img(width, height);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const double cx = spec.center.x + (c - 0.5 * (spec.cols - 1)) * spec.spacing;
            const double cy = spec.center.y + (r - 0.5 * (spec.rows - 1)) * spec.spacing;
            if (dot_radius <= 0.0) {
                const int x = static_cast<int>(std::lround(cx));
                const int y = static_cast<int>(std::lround(cy));
                if (x >= 0 && y >= 0 && x < width && y < height) img.at(x, y) = level;
                continue;
            }
            const int x0 = static_cast<int>(std::floor(cx - dot_radius - 1));
            const int x1 = static_cast<int>(std::ceil(cx + dot_radius + 1));
            const int y0 = static_cast<int>(std::floor(cy - dot_radius - 1));
            const int y1 = static_cast<int>(std::ceil(cy + dot_radius + 1));
            for (int y = std::max(y0, 0); y <= std::min(y1, height - 1); ++y) {
                for (int x = std::max(x0, 0); x <= std::min(x1, width - 1); ++x) {
                    int hits = 0;
                    for (int sy = 0; sy < 4; ++sy) {
                        for (int sx = 0; sx < 4; ++sx) {
                            const double px = x - 0.5 + (sx + 0.5) / 4 - cx;
                            const double py = y - 0.5 + (sy + 0.5) / 4 - cy;
                            hits += px * px + py * py <= dot_radius * dot_radius ? 1 : 0;
                        }
                    }
                    img.at(x, y) = std::max(img.at(x, y), level * hits / 16.0);
                }
            }
        }
    }
    return img;
}

double otsu_threshold(const Image& img) {
    const double peak = img.max();
    if (!(peak > 0.0)) throw DetectionError("otsu: image has no positive pixels");
    constexpr int kBins = 256;
    std::array<double, kBins> hist{};
    for (double v : img.pixels()) {
        const int b = std::clamp(static_cast<int>(std::clamp(v, 0.0, peak) / peak * (kBins - 1) + 0.5), 0, kBins - 1);
        hist[b] += 1.0;
    }
    const double total = static_cast<double>(img.size());
    double sum_all = 0.0;
    for (int i = 0; i < kBins; ++i) sum_all += i * hist[i];

    double w0 = 0.0;
    double sum0 = 0.0;
    double best = -1.0;
    int best_bin = 0;
    for (int t = 0; t < kBins - 1; ++t) {
        w0 += hist[t];
        sum0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_bin = t;
        }
    }
    // Pixels in bins <= best_bin are background.
    return (best_bin + 0.5) / (kBins - 1) * peak;
}

Vec2 Component::centroid() const {
    Vec2 c;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        c.x += xs[i];
        c.y += ys[i];
    }
    const double n = static_cast<double>(xs.size());
    return {c.x / n, c.y / n};
}

std::vector<Component> connected_components(const Image& img, double threshold) {
    const int w = img.width();
    const int h = img.height();
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<Component> out;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (label[idx] >= 0 || !(img.at(x, y) > threshold)) continue;
            const int id = static_cast<int>(out.size());
            Component comp;
            stack.push_back({x, y});
            label[idx] = id;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                comp.xs.push_back(cx);
                comp.ys.push_back(cy);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
                        if (label[n] >= 0 || !(img.at(nx, ny) > threshold)) continue;
                        label[n] = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
            out.push_back(std::move(comp));
        }
    }
    return out;
}

Circle fit_circle(std::span<const Vec2> points) {
    if (points.size() < 3) {
        // Degenerate: centroid and mean distance.
        Circle c;
        if (points.empty()) return c;
        for (const auto& p : points) {
            c.center.x += p.x;
            c.center.y += p.y;
        }
        c.center.x /= static_cast<double>(points.size());
        c.center.y /= static_cast<double>(points.size());
        for (const auto& p : points) c.radius += std::hypot(p.x - c.center.x, p.y - c.center.y);
        c.radius /= static_cast<double>(points.size());
        return c;
    }
    // Centre the data for conditioning, then solve x^2 + y^2 + D x + E y + F = 0.
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());

    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, sz = 0, sxz = 0, syz = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = p.x - mx;
        const double y = p.y - my;
        const double z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sx += x;
        sy += y;
        sz += z;
        sxz += x * z;
        syz += y * z;
    }
    // Normal equations for [D E F].
    double a[3][4] = {{sxx, sxy, sx, -sxz}, {sxy, syy, sy, -syz}, {sx, sy, n, -sz}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) throw DetectionError("circle fit: collinear points");
        if (pivot != col) {
            for (int k = 0; k < 4; ++k) std::swap(a[col][k], a[pivot][k]);
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int k = col; k < 4; ++k) a[r][k] -= f * a[col][k];
        }
    }
    const double d = a[0][3] / a[0][0];
    const double e = a[1][3] / a[1][1];
    const double f = a[2][3] / a[2][2];
    Circle c;
    c.center = {mx - 0.5 * d, my - 0.5 * e};
    c.radius = std::sqrt(std::max(0.0, 0.25 * (d * d + e * e) - f));
    return c;
}

std::vector<Vec2> boundary_points(const Component& component) {
    std::vector<std::pair<int, int>> members;
    members.reserve(component.size());
    for (std::size_t i = 0; i < component.size(); ++i) members.push_back({component.xs[i], component.ys[i]});
    std::sort(members.begin(), members.end());
    const auto contains = [&](int x, int y) {
        return std::binary_search(members.begin(), members.end(), std::make_pair(x, y));
    };
    std::vector<Vec2> pts;
    constexpr std::array<std::array<int, 2>, 4> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& [x, y] : members) {
        for (const auto& d : kDirs) {
            if (!contains(x + d[0], y + d[1])) pts.push_back({x + 0.5 * d[0], y + 0.5 * d[1]});
        }
    }
    return pts;
}

std::vector<DotMeasurement> measure_dot_grid(const Image& img, const DotGridSpec& expected) {
    const double threshold = otsu_threshold(img);
    auto comps = connected_components(img, threshold);
    const auto want = static_cast<std::size_t>(expected.rows) * static_cast<std::size_t>(expected.cols);
    if (comps.size() != want) {
        std::ostringstream msg;
        msg << "dot grid: found " << comps.size() << " blobs, expected " << want;
        throw DetectionError(msg.str());
    }
    if (want < 9) throw DetectionError("dot grid: need at least 3x3 dots");
    const auto dist = [&](const Component& c) {
        const Vec2 p = c.centroid();
        return std::hypot(p.x - expected.center.x, p.y - expected.center.y);
    };
    std::stable_sort(comps.begin(), comps.end(),
                     [&](const Component& a, const Component& b) { return dist(a) < dist(b); });
    comps.resize(9);
    // Report in raster order (top-to-bottom, left-to-right).
    std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        const Vec2 pa = a.centroid();
        const Vec2 pb = b.centroid();
        if (std::abs(pa.y - pb.y) > 0.5) return pa.y < pb.y;
        return pa.x < pb.x;
    });

    std::vector<DotMeasurement> out;
    for (const auto& c : comps) {
        const auto pts = boundary_points(c);
        const Circle circle = fit_circle(pts);
        out.push_back({circle.center, circle.radius});
    }
    return out;
}

} // namespace sweepfocus
