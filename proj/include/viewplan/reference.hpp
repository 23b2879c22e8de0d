#pragma once

#include "viewplan/metrics.hpp"
#include "viewplan/render.hpp"
#include "viewplan/sift_detail.hpp"
#include "viewplan/tsdf.hpp"

// Serial reference implementations of the parallel kernels, kept for
// parity tests and the benchmark, plus the O(n^2) metric oracles.
namespace viewplan::ref {

RenderOutput render_serial(const Raycaster& caster, const SphericalPose& pose,
                           const CameraIntrinsics& intrinsics);

void integrate_serial(TsdfVolume& volume, const ImageU8& rgb, const ImageF32& depth_m,
                      const CameraIntrinsics& intrinsics, const RigidTransform& camera_to_world);

detail::FloatImage gaussian_blur_serial(const detail::FloatImage& src, float sigma);

double nearest_dist2_bruteforce(const Eigen::Vector3d& query,
                                const std::vector<Eigen::Vector3d>& points);

double hausdorff_bruteforce(const PointCloud& a, const PointCloud& b);
double chamfer_bruteforce(const PointCloud& a, const PointCloud& b);

}  // namespace viewplan::ref
