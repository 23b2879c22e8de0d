#include "viewplan/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viewplan {

ImageGray8 to_grayscale(const ImageU8& rgb) {
    if (rgb.channels != 3) {
        throw std::invalid_argument("to_grayscale: expected a 3-channel image");
    }
    ImageGray8 out(rgb.width, rgb.height);
    const uint8_t* src = rgb.data.data();
    uint8_t* dst = out.data.data();
    const size_t n = size_t(rgb.width) * rgb.height;
    for (size_t i = 0; i < n; ++i) {
        const double y = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
        dst[i] = static_cast<uint8_t>(std::min(255L, std::lround(y)));
    }
    return out;
}

ImageGray8 downsample_gray(const ImageGray8& src, int out_size) {
    if (out_size < 1 || src.width < 1 || src.height < 1) {
        throw std::invalid_argument("downsample_gray: empty image or invalid size");
    }
    ImageGray8 out(out_size, out_size);
    for (int oy = 0; oy < out_size; ++oy) {
        const int y0 = oy * src.height / out_size;
        const int y1 = std::max(y0 + 1, (oy + 1) * src.height / out_size);
        for (int ox = 0; ox < out_size; ++ox) {
            const int x0 = ox * src.width / out_size;
            const int x1 = std::max(x0 + 1, (ox + 1) * src.width / out_size);
            long sum = 0;
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) sum += src.at(x, y);
            }
            const long count = long(y1 - y0) * (x1 - x0);
            out.at(ox, oy) = static_cast<uint8_t>((sum + count / 2) / count);
        }
    }
    return out;
}

}  // namespace viewplan
