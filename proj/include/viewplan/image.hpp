#pragma once

#include <cstdint>
#include <vector>

namespace viewplan {

/// Interleaved 8-bit image, row-major.
struct ImageU8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<uint8_t> data;

    ImageU8() = default;
    ImageU8(int w, int h, int c) : width(w), height(h), channels(c), data(size_t(w) * h * c, 0) {}

    uint8_t& at(int x, int y, int c) { return data[(size_t(y) * width + x) * channels + c]; }
    uint8_t at(int x, int y, int c) const { return data[(size_t(y) * width + x) * channels + c]; }
};

struct ImageGray8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    ImageGray8() = default;
    ImageGray8(int w, int h) : width(w), height(h), data(size_t(w) * h, 0) {}

    uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
    uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }
};

/// Single-channel float image; used for depth in meters with 0 as the
/// no-measurement sentinel.
struct ImageF32 {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    ImageF32() = default;
    ImageF32(int w, int h) : width(w), height(h), data(size_t(w) * h, 0.0f) {}

    float& at(int x, int y) { return data[size_t(y) * width + x]; }
    float at(int x, int y) const { return data[size_t(y) * width + x]; }
};

/// Standard luma weights 0.299/0.587/0.114, rounded to 8 bits.
ImageGray8 to_grayscale(const ImageU8& rgb);

/// Box-filter downsample to out_size x out_size (area average).
ImageGray8 downsample_gray(const ImageGray8& src, int out_size);

}  // namespace viewplan
