#include "sweepfocus/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "sweepfocus/errors.hpp"

namespace sweepfocus {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text) *text = msg;
    png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

} // namespace

double srgb_to_linear(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

Image read_png(const std::filesystem::path& path, bool linear) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) throw ValidationError("cannot open " + path.string());
    std::string err;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
    if (!png) throw ValidationError("png: out of memory");
    png_infop info = png_create_info_struct(png);
    std::vector<std::uint8_t> buffer;
    int width = 0, height = 0, channels = 0, depth = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("png read failed for " + path.string() + ": " + err);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    channels = png_get_channels(png, info);
    depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * static_cast<std::size_t>(height));
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    if (depth != 8 && depth != 16) throw ValidationError("png: unsupported bit depth in " + path.string());

    // 16-bit files are linear; 8-bit ones sRGB unless told otherwise.
    const int bytes = depth / 8;
    const auto channel = [&](const std::uint8_t* px, int ch) {
        if (bytes == 2) return (px[2 * ch] << 8 | px[2 * ch + 1]) / 65535.0;
        const double v = px[ch] / 255.0;
        return linear ? v : srgb_to_linear(v);
    };
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < width; ++x) {
            const std::uint8_t* px = row + static_cast<std::size_t>(x) * channels * bytes;
            if (channels >= 3) {
                img.at(x, y) = 0.2126 * channel(px, 0) + 0.7152 * channel(px, 1) + 0.0722 * channel(px, 2);
            } else {
                img.at(x, y) = channel(px, 0);
            }
        }
    }
    return img;
}

void write_png(const std::filesystem::path& path, const Image& img, PngEncoding encoding) {
    if (img.empty()) throw ValidationError("png: empty image");
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) throw ValidationError("cannot write " + path.string());
    const bool wide = encoding == PngEncoding::Linear16;
    const int bpp = wide ? 2 : 1;
    std::vector<std::uint8_t> buffer(img.size() * bpp);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double v = std::clamp(img.at(x, y), 0.0, 1.0);
            const std::size_t i = (static_cast<std::size_t>(y) * img.width() + x) * bpp;
            if (wide) {
                const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
                buffer[i] = static_cast<std::uint8_t>(q >> 8);
                buffer[i + 1] = static_cast<std::uint8_t>(q & 0xff);
            } else {
                const double e = encoding == PngEncoding::Srgb8 ? linear_to_srgb(v) : v;
                buffer[i] = static_cast<std::uint8_t>(std::lround(e * 255.0));
            }
        }
    }
    std::string err;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
    if (!png) throw ValidationError("png: out of memory");
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ValidationError("png write failed for " + path.string() + ": " + err);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()),
                 wide ? 16 : 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    if (encoding == PngEncoding::Srgb8) png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
    // Fixed timestamp-free output keeps files byte-identical across runs.
    png_write_info(png, info);
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(png, buffer.data() + static_cast<std::size_t>(y) * img.width() * bpp);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace sweepfocus
