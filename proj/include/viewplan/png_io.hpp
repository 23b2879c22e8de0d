#pragma once

#include <string>

#include "viewplan/image.hpp"

namespace viewplan {

// Dataset interchange formats: RGB as 8-bit PNG, depth as 16-bit
// grayscale PNG holding millimeters with 0 as the invalid sentinel.

void write_png_rgb8(const std::string& path, const ImageU8& image);
ImageU8 read_png_rgb8(const std::string& path);

void write_png_depth_mm(const std::string& path, const ImageF32& depth_m);
ImageF32 read_png_depth_mm(const std::string& path);

}  // namespace viewplan
