#include "sweepfocus/psf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

namespace {
constexpr int kSuper = 4;
}

DiscKernel::DiscKernel(double diameter_px) : diameter_(diameter_px) {
    if (!(diameter_px >= 0.0) || !std::isfinite(diameter_px)) {
        throw DomainError("disc kernel diameter must be finite and non-negative");
    }
    const double r = 0.5 * diameter_px;
    const int half = static_cast<int>(std::ceil(r + 0.5));
    const int side = 2 * half + 1;
    std::vector<double> w(static_cast<std::size_t>(side) * side, 0.0);
    double total = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            int hits = 0;
            for (int sy = 0; sy < kSuper; ++sy) {
                for (int sx = 0; sx < kSuper; ++sx) {
                    const double px = dx - 0.5 + (sx + 0.5) / kSuper;
                    const double py = dy - 0.5 + (sy + 0.5) / kSuper;
                    hits += (px * px + py * py <= r * r) ? 1 : 0;
                }
            }
            w[static_cast<std::size_t>(dy + half) * side + (dx + half)] = hits;
            total += hits;
        }
    }
    if (total == 0.0) {
        radius_ = 0;
        weights_ = {1.0};
        taps_ = 1;
        runs_ = {{0, 0, 0, 1.0}};
        return;
    }
    // Trim empty border rows/columns.
    int used = 0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            if (w[static_cast<std::size_t>(dy + half) * side + (dx + half)] > 0.0) {
                used = std::max({used, std::abs(dx), std::abs(dy)});
            }
        }
    }
    radius_ = used;
    const int out_side = 2 * used + 1;
    weights_.assign(static_cast<std::size_t>(out_side) * out_side, 0.0);
    taps_ = 0;
    for (int dy = -used; dy <= used; ++dy) {
        int run_start = 0;
        double run_weight = 0.0;
        bool in_run = false;
        for (int dx = -used; dx <= used + 1; ++dx) {
            double v = 0.0;
            if (dx <= used) {
                v = w[static_cast<std::size_t>(dy + half) * side + (dx + half)] / total;
                weights_[static_cast<std::size_t>(dy + used) * out_side + (dx + used)] = v;
                taps_ += v > 0.0 ? 1 : 0;
            }
            if (in_run && v != run_weight) {
                runs_.push_back({dy, run_start, dx - 1, run_weight});
                in_run = false;
            }
            if (!in_run && v > 0.0) {
                in_run = true;
                run_start = dx;
                run_weight = v;
            }
        }
    }
}

double DiscKernel::weight(int dx, int dy) const {
    if (std::abs(dx) > radius_ || std::abs(dy) > radius_) return 0.0;
    const int side = 2 * radius_ + 1;
    return weights_[static_cast<std::size_t>(dy + radius_) * side + (dx + radius_)];
}

double DiscKernel::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

Image convolve(const Image& src, const DiscKernel& kernel) {
    if (kernel.is_impulse()) return src;
    const int w = src.width();
    const int h = src.height();
    if (2 * kernel.radius() + 1 > std::min(w, h)) {
        throw DomainError("PSF kernel is larger than the image; pad the canvas");
    }
    Image out(w, h);

    const std::size_t nnz = src.count_nonzero();
    const double splat_cost = static_cast<double>(nnz) * static_cast<double>(kernel.nonzero());
    const double gather_cost = static_cast<double>(w) * h * kernel.runs().size();

    if (splat_cost <= gather_cost) {
        const int r = kernel.radius();
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = src.at(x, y);
                if (v == 0.0) continue;
                for (int dy = -r; dy <= r; ++dy) {
                    const int oy = y + dy;
                    if (oy < 0 || oy >= h) continue;
                    for (int dx = -r; dx <= r; ++dx) {
                        const int ox = x + dx;
                        if (ox < 0 || ox >= w) continue;
                        const double k = kernel.weight(dx, dy);
                        if (k != 0.0) out.at(ox, oy) += k * v;
                    }
                }
            }
        }
        return out;
    }

    // prefix[y][i] = sum of src row y over columns [0, i).
    std::vector<double> prefix(static_cast<std::size_t>(h) * (w + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double* row = &prefix[static_cast<std::size_t>(y) * (w + 1)];
        for (int x = 0; x < w; ++x) row[x + 1] = row[x] + src.at(x, y);
    }
    const auto row_sum = [&](int y, int a, int b) { // columns [a, b], clamped
        a = std::max(a, 0);
        b = std::min(b, w - 1);
        if (a > b) return 0.0;
        const double* row = &prefix[static_cast<std::size_t>(y) * (w + 1)];
        return row[b + 1] - row[a];
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (const auto& run : kernel.runs()) {
                const int sy = y - run.dy;
                if (sy < 0 || sy >= h) continue;
                acc += run.weight * row_sum(sy, x - run.dx1, x - run.dx0);
            }
            out.at(x, y) = std::max(acc, 0.0);
        }
    }
    return out;
}

} // namespace sweepfocus
