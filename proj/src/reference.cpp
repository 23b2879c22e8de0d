#include "viewplan/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "viewplan/render_detail.hpp"

namespace viewplan::ref {

RenderOutput render_serial(const Raycaster& caster, const SphericalPose& pose,
                           const CameraIntrinsics& intrinsics) {
    const detail::RenderContext ctx = detail::make_context(pose, intrinsics);
    RenderOutput out;
    out.rgb = ImageU8(intrinsics.width, intrinsics.height, 3);
    out.depth = ImageF32(intrinsics.width, intrinsics.height);
    for (int py = 0; py < intrinsics.height; ++py) {
        for (int px = 0; px < intrinsics.width; ++px) {
            detail::shade_pixel(caster, ctx, px, py, &out.rgb.at(px, py, 0),
                                &out.depth.at(px, py));
        }
    }
    return out;
}

void integrate_serial(TsdfVolume& volume, const ImageU8& rgb, const ImageF32& depth_m,
                      const CameraIntrinsics& intrinsics, const RigidTransform& camera_to_world) {
    intrinsics.validate();
    if (rgb.width != intrinsics.width || depth_m.width != intrinsics.width) {
        throw std::invalid_argument("integrate_serial: image dimensions do not match intrinsics");
    }
    integrate_slab(volume, rgb, depth_m, intrinsics, camera_to_world, 0, volume.dims().z());
}

detail::FloatImage gaussian_blur_serial(const detail::FloatImage& src, float sigma) {
    return detail::gaussian_blur(src, sigma, /*parallel=*/false);
}

double nearest_dist2_bruteforce(const Eigen::Vector3d& query,
                                const std::vector<Eigen::Vector3d>& points) {
    double best = std::numeric_limits<double>::max();
    for (const auto& p : points) best = std::min(best, point_dist2(query, p));
    return best;
}

double hausdorff_bruteforce(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw std::domain_error("hausdorff_bruteforce: empty cloud");
    double worst = 0.0;
    for (const auto& p : a.points) {
        worst = std::max(worst, std::sqrt(nearest_dist2_bruteforce(p, b.points)));
    }
    for (const auto& p : b.points) {
        worst = std::max(worst, std::sqrt(nearest_dist2_bruteforce(p, a.points)));
    }
    return worst;
}

double chamfer_bruteforce(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw std::domain_error("chamfer_bruteforce: empty cloud");
    double sum_a = 0.0;
    for (const auto& p : a.points) sum_a += std::sqrt(nearest_dist2_bruteforce(p, b.points));
    double sum_b = 0.0;
    for (const auto& p : b.points) sum_b += std::sqrt(nearest_dist2_bruteforce(p, a.points));
    return 0.5 * (sum_a / double(a.points.size()) + sum_b / double(b.points.size()));
}

}  // namespace viewplan::ref
