#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "viewplan/render.hpp"

// Per-pixel shading shared by the OpenMP renderer and the serial
// reference so the two stay bit-identical.
namespace viewplan::detail {

inline constexpr uint8_t kBackground[3] = {38, 40, 46};

struct RenderContext {
    Eigen::Vector3d origin;
    Eigen::Matrix3d rotation;  // camera to world
    double fx, fy, cx, cy;
    double depth_min, depth_max;
};

RenderContext make_context(const SphericalPose& pose, const CameraIntrinsics& intrinsics);

void shade_pixel(const Raycaster& caster, const RenderContext& ctx, int px, int py, uint8_t* rgb,
                 float* depth);

}  // namespace viewplan::detail
