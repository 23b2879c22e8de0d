#include "viewplan/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace viewplan {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const char* what) {
    throw std::runtime_error("png: " + path + ": " + what);
}

void write_png(const std::string& path, int width, int height, int color_type, int bit_depth,
               const std::vector<png_bytep>& rows) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "write error");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr file;

    explicit PngReader(const std::string& path) : file(std::fopen(path.c_str(), "rb")) {
        if (!file) fail(path, "cannot open for reading");
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png) fail(path, "png_create_read_struct failed");
        info = png_create_info_struct(png);
        if (!info) fail(path, "png_create_info_struct failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

}  // namespace

void write_png_rgb8(const std::string& path, const ImageU8& image) {
    if (image.channels != 3 || image.width < 1 || image.height < 1) {
        throw std::invalid_argument("write_png_rgb8: expected a non-empty 3-channel image");
    }
    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y) {
        rows[y] = const_cast<png_bytep>(image.data.data() + size_t(y) * image.width * 3);
    }
    write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8, rows);
}

ImageU8 read_png_rgb8(const std::string& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail(path, "read error");
    png_init_io(r.png, r.file.get());
    png_read_info(r.png, r.info);

    const int width = png_get_image_width(r.png, r.info);
    const int height = png_get_image_height(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);
    if (color != PNG_COLOR_TYPE_RGB || depth != 8) fail(path, "expected 8-bit RGB");

    ImageU8 image(width, height, 3);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = image.data.data() + size_t(y) * width * 3;
    }
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return image;
}

void write_png_depth_mm(const std::string& path, const ImageF32& depth_m) {
    if (depth_m.width < 1 || depth_m.height < 1) {
        throw std::invalid_argument("write_png_depth_mm: empty image");
    }
    const int w = depth_m.width, h = depth_m.height;
    // PNG 16-bit samples are big-endian.
    std::vector<uint8_t> packed(size_t(w) * h * 2);
    for (size_t i = 0; i < size_t(w) * h; ++i) {
        const float meters = depth_m.data[i];
        long mm = meters > 0.0f ? std::lround(double(meters) * 1000.0) : 0;
        if (mm < 0) mm = 0;
        if (mm > 65535) mm = 65535;
        packed[2 * i] = static_cast<uint8_t>(mm >> 8);
        packed[2 * i + 1] = static_cast<uint8_t>(mm & 0xff);
    }
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) {
        rows[y] = packed.data() + size_t(y) * w * 2;
    }
    write_png(path, w, h, PNG_COLOR_TYPE_GRAY, 16, rows);
}

ImageF32 read_png_depth_mm(const std::string& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail(path, "read error");
    png_init_io(r.png, r.file.get());
    png_read_info(r.png, r.info);

    const int width = png_get_image_width(r.png, r.info);
    const int height = png_get_image_height(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);
    if (color != PNG_COLOR_TYPE_GRAY || depth != 16) fail(path, "expected 16-bit grayscale");

    std::vector<uint8_t> packed(size_t(width) * height * 2);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = packed.data() + size_t(y) * width * 2;
    }
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    ImageF32 out(width, height);
    for (size_t i = 0; i < size_t(width) * height; ++i) {
        const uint16_t mm = uint16_t(packed[2 * i]) << 8 | packed[2 * i + 1];
        out.data[i] = mm == 0 ? 0.0f : float(mm) / 1000.0f;
    }
    return out;
}

}  // namespace viewplan
