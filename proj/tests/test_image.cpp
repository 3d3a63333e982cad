#include <gtest/gtest.h>

#include <filesystem>

#include "sweepfocus/errors.hpp"
#include "sweepfocus/image.hpp"
#include "sweepfocus/png_io.hpp"

using namespace sweepfocus;

TEST(Image, BilinearAndBounds) {
    Image img(3, 2);
    img.at(0, 0) = 1.0;
    img.at(1, 0) = 3.0;
    EXPECT_DOUBLE_EQ(img.bilinear(0.5, 0.0), 2.0);
    EXPECT_DOUBLE_EQ(img.bilinear(0.0, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(img.bilinear(-1.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(img.bilinear(-0.5, 0.0), 0.5); // fades against the zero border
    EXPECT_DOUBLE_EQ(img.get_or_zero(5, 5), 0.0);
    EXPECT_EQ(img.count_nonzero(), 2u);
    EXPECT_DOUBLE_EQ(img.sum(), 4.0);
    EXPECT_THROW(Image(-1, 2), ValidationError);
    Image other(2, 2);
    EXPECT_THROW(img += other, ValidationError);
}

TEST(Image, ResampleScaled) {
    Image src(9, 9);
    src.at(6, 4) = 1.0;
    // Identity
    EXPECT_EQ(resample_scaled(src, 9, 9, {4, 4}, {4, 4}, 1.0), src);
    // Scale 2 about the centre moves the texel at +2 to +4.
    const Image big = resample_scaled(src, 9, 9, {4, 4}, {4, 4}, 2.0);
    EXPECT_DOUBLE_EQ(big.at(8, 4), 1.0);
    EXPECT_DOUBLE_EQ(big.at(7, 4), 0.5);
    const Vec2 s = scaled_source_coord({8, 4}, {4, 4}, {4, 4}, 2.0);
    EXPECT_DOUBLE_EQ(s.x, 6.0);
}

TEST(Image, Quantize8) {
    Image img(4, 1);
    img.at(0, 0) = -0.2;
    img.at(1, 0) = 0.5;
    img.at(2, 0) = 1.0;
    img.at(3, 0) = 7.0;
    const auto q = quantize8(img);
    EXPECT_EQ(q, (std::vector<std::uint8_t>{0, 128, 255, 255}));
    const Image back = dequantize8(q, 4, 1);
    EXPECT_DOUBLE_EQ(back.at(2, 0), 1.0);
}

TEST(PngIo, SrgbTransfer) {
    for (double v : {0.0, 0.001, 0.2, 0.5, 1.0}) EXPECT_NEAR(srgb_to_linear(linear_to_srgb(v)), v, 1e-12);
    EXPECT_NEAR(linear_to_srgb(0.5), 0.7353569830524495, 1e-12);
}

TEST(PngIo, RoundTrips) {
    const auto dir = std::filesystem::temp_directory_path();
    Image img(5, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 5; ++x) img.at(x, y) = (x + 5 * y) / 14.0;
    }
    const auto p16 = dir / "sweepfocus_rt16.png";
    write_png(p16, img, PngEncoding::Linear16);
    const Image b16 = read_png(p16);
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(b16.pixels()[i], img.pixels()[i], 0.5 / 65535.0);
    // Values on the 16-bit grid survive exactly.
    write_png(p16, b16, PngEncoding::Linear16);
    EXPECT_EQ(read_png(p16), b16);

    const auto p8 = dir / "sweepfocus_rt8.png";
    write_png(p8, img, PngEncoding::Srgb8);
    const Image b8 = read_png(p8);
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(b8.pixels()[i], img.pixels()[i], 0.01);
    write_png(p8, img, PngEncoding::Linear8);
    const Image l8 = read_png(p8, true);
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(l8.pixels()[i], img.pixels()[i], 0.5 / 255.0);
    std::filesystem::remove(p16);
    std::filesystem::remove(p8);
    EXPECT_THROW(read_png(dir / "does_not_exist.png"), ValidationError);
}
