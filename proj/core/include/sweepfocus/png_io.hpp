#pragma once

#include <filesystem>

#include "sweepfocus/image.hpp"

namespace sweepfocus {

enum class PngEncoding { Srgb8, Linear8, Linear16 };

/// Reads a PNG as linear-light grey in [0, 1]. Colour inputs are reduced to
/// Rec.709 luminance. 8-bit data are assumed sRGB-encoded unless `linear`;
/// 16-bit data are always linear.
Image read_png(const std::filesystem::path& path, bool linear = false);

/// Writes values clamped to [0, 1].
void write_png(const std::filesystem::path& path, const Image& img, PngEncoding encoding = PngEncoding::Srgb8);

double srgb_to_linear(double v);
double linear_to_srgb(double v);

} // namespace sweepfocus
