#pragma once

#include <vector>

#include "viewplan/geometry.hpp"
#include "viewplan/image.hpp"
#include "viewplan/scene.hpp"

namespace viewplan {

/// Registered RGB + depth pair. Depth is the z-distance along the
/// optical axis in meters, 0 where no triangle was hit inside the
/// camera's depth range.
struct RenderOutput {
    ImageU8 rgb;
    ImageF32 depth;
};

struct RayHit {
    bool hit = false;
    double t = 0.0;  // camera z-depth for canonical pixel rays
    int triangle = -1;
    double u = 0.0, v = 0.0;  // barycentric at v1/v2
};

/// Immutable BVH over a scene's triangles; build once, trace from many
/// poses.
class Raycaster {
public:
    explicit Raycaster(const Scene& scene);

    RayHit trace(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const;
    const Scene& scene() const { return *scene_; }

private:
    struct Node {
        Eigen::Vector3d lo, hi;
        int left = -1, right = -1;  // interior
        int first = 0, count = 0;   // leaf triangle range
    };

    int build(std::vector<int>& order, int begin, int end);

    const Scene* scene_;
    std::vector<Node> nodes_;
    std::vector<int> order_;
};

/// Raycast render with Lambertian headlight shading. Pure: identical
/// inputs give bit-identical images, independent of thread count.
RenderOutput render(const Raycaster& caster, const SphericalPose& pose,
                    const CameraIntrinsics& intrinsics);

/// Convenience overload building a throwaway raycaster.
RenderOutput render(const Scene& scene, const SphericalPose& pose,
                    const CameraIntrinsics& intrinsics);

}  // namespace viewplan
