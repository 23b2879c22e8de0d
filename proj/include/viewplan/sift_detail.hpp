#pragma once

#include <vector>

#include "viewplan/image.hpp"

// Float image plumbing shared between the extractor, the serial
// reference kernels, and the benchmark.
namespace viewplan::detail {

struct FloatImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    FloatImage() = default;
    FloatImage(int w, int h) : width(w), height(h), data(size_t(w) * h, 0.0f) {}

    float& at(int x, int y) { return data[size_t(y) * width + x]; }
    float at(int x, int y) const { return data[size_t(y) * width + x]; }
};

FloatImage to_float(const ImageGray8& image);  // scaled to [0, 1]

std::vector<float> gaussian_kernel(float sigma);

/// Separable Gaussian with replicate borders. Row-parallel when
/// `parallel`; both paths are bit-identical.
FloatImage gaussian_blur(const FloatImage& src, float sigma, bool parallel);

FloatImage half_sample(const FloatImage& src);  // every other pixel

FloatImage subtract(const FloatImage& a, const FloatImage& b, bool parallel);

}  // namespace viewplan::detail
