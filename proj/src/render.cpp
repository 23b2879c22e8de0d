#include "viewplan/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "viewplan/render_detail.hpp"

namespace viewplan {

namespace {

constexpr double kRayEpsilon = 1e-9;

inline Eigen::Vector3d tri_min(const SceneTriangle& t) {
    return t.v0.cwiseMin(t.v1).cwiseMin(t.v2);
}

inline Eigen::Vector3d tri_max(const SceneTriangle& t) {
    return t.v0.cwiseMax(t.v1).cwiseMax(t.v2);
}

// Moeller-Trumbore; t is in units of |dir|.
inline bool intersect_triangle(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                               const SceneTriangle& tri, double& t, double& u, double& v) {
    const Eigen::Vector3d e1 = tri.v1 - tri.v0;
    const Eigen::Vector3d e2 = tri.v2 - tri.v0;
    const Eigen::Vector3d p = dir.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < 1e-16) return false;
    const double inv_det = 1.0 / det;
    const Eigen::Vector3d s = origin - tri.v0;
    u = s.dot(p) * inv_det;
    if (u < 0.0 || u > 1.0) return false;
    const Eigen::Vector3d q = s.cross(e1);
    v = dir.dot(q) * inv_det;
    if (v < 0.0 || u + v > 1.0) return false;
    t = e2.dot(q) * inv_det;
    return t > kRayEpsilon;
}

inline bool intersect_aabb(const Eigen::Vector3d& origin, const Eigen::Vector3d& inv_dir,
                           const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double t_best) {
    double t0 = 0.0, t1 = t_best;
    for (int a = 0; a < 3; ++a) {
        const double ta = (lo[a] - origin[a]) * inv_dir[a];
        const double tb = (hi[a] - origin[a]) * inv_dir[a];
        t0 = std::max(t0, std::min(ta, tb));
        t1 = std::min(t1, std::max(ta, tb));
    }
    return t0 <= t1;
}

}  // namespace

Raycaster::Raycaster(const Scene& scene) : scene_(&scene) {
    order_.resize(scene.triangles.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!order_.empty()) {
        nodes_.reserve(2 * order_.size());
        build(order_, 0, int(order_.size()));
    }
}

int Raycaster::build(std::vector<int>& order, int begin, int end) {
    Node node;
    node.lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
    node.hi = -node.lo;
    for (int i = begin; i < end; ++i) {
        const auto& t = scene_->triangles[order[i]];
        node.lo = node.lo.cwiseMin(tri_min(t));
        node.hi = node.hi.cwiseMax(tri_max(t));
    }
    const int index = int(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= 4) {
        nodes_[index].first = begin;
        nodes_[index].count = end - begin;
        return index;
    }
    const Eigen::Vector3d extent = node.hi - node.lo;
    int axis = 0;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;
    // Median split on centroid keeps the tree balanced and the build
    // deterministic.
    const int mid = (begin + end) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](int a, int b) {
                         const auto& ta = scene_->triangles[a];
                         const auto& tb = scene_->triangles[b];
                         const double ca = tri_min(ta)[axis] + tri_max(ta)[axis];
                         const double cb = tri_min(tb)[axis] + tri_max(tb)[axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const int left = build(order, begin, mid);
    const int right = build(order, mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

RayHit Raycaster::trace(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const {
    RayHit best;
    if (nodes_.empty()) return best;
    best.t = std::numeric_limits<double>::max();
    const Eigen::Vector3d inv_dir = dir.cwiseInverse();

    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!intersect_aabb(origin, inv_dir, node.lo, node.hi, best.t)) continue;
        if (node.count > 0 || node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const int tri = order_[i];
                double t, u, v;
                if (intersect_triangle(origin, dir, scene_->triangles[tri], t, u, v) &&
                    t < best.t) {
                    best.hit = true;
                    best.t = t;
                    best.triangle = tri;
                    best.u = u;
                    best.v = v;
                }
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    if (!best.hit) best.t = 0.0;
    return best;
}

namespace detail {

void shade_pixel(const Raycaster& caster, const RenderContext& ctx, int px, int py,
                 uint8_t* rgb, float* depth) {
    const Eigen::Vector3d dir_cam((px + 0.5 - ctx.cx) / ctx.fx, (py + 0.5 - ctx.cy) / ctx.fy, 1.0);
    const Eigen::Vector3d dir = ctx.rotation * dir_cam;
    const RayHit hit = caster.trace(ctx.origin, dir);

    if (!hit.hit || hit.t < ctx.depth_min || hit.t > ctx.depth_max) {
        rgb[0] = kBackground[0];
        rgb[1] = kBackground[1];
        rgb[2] = kBackground[2];
        *depth = 0.0f;
        return;
    }
    const SceneTriangle& tri = caster.scene().triangles[hit.triangle];
    const double w = 1.0 - hit.u - hit.v;
    const Eigen::Vector2d uv = w * tri.uv0 + hit.u * tri.uv1 + hit.v * tri.uv2;
    const Eigen::Vector3f albedo =
        sample_albedo(caster.scene().materials[tri.material], uv.x(), uv.y());

    const Eigen::Vector3d normal = (tri.v1 - tri.v0).cross(tri.v2 - tri.v0).normalized();
    const Eigen::Vector3d view = dir.normalized();
    // Two-sided headlight: ambient floor plus Lambert against the ray.
    const double shade = 0.3 + 0.7 * std::abs(normal.dot(view));
    for (int c = 0; c < 3; ++c) {
        const double value = 255.0 * double(albedo[c]) * shade;
        rgb[c] = static_cast<uint8_t>(std::clamp<long>(std::lround(value), 0, 255));
    }
    *depth = float(hit.t);
}

RenderContext make_context(const SphericalPose& pose, const CameraIntrinsics& intrinsics) {
    intrinsics.validate();
    const RigidTransform cam_to_world = look_at_transform(pose);
    RenderContext ctx;
    ctx.origin = cam_to_world.translation();
    ctx.rotation = cam_to_world.rotation();
    ctx.fx = intrinsics.fx();
    ctx.fy = intrinsics.fy();
    ctx.cx = intrinsics.cx();
    ctx.cy = intrinsics.cy();
    ctx.depth_min = intrinsics.depth_min_m;
    ctx.depth_max = intrinsics.depth_max_m;
    return ctx;
}

}  // namespace detail

RenderOutput render(const Raycaster& caster, const SphericalPose& pose,
                    const CameraIntrinsics& intrinsics) {
    const detail::RenderContext ctx = detail::make_context(pose, intrinsics);
    RenderOutput out;
    out.rgb = ImageU8(intrinsics.width, intrinsics.height, 3);
    out.depth = ImageF32(intrinsics.width, intrinsics.height);

#pragma omp parallel for schedule(static)
    for (int py = 0; py < intrinsics.height; ++py) {
        uint8_t* rgb_row = out.rgb.data.data() + size_t(py) * intrinsics.width * 3;
        float* depth_row = out.depth.data.data() + size_t(py) * intrinsics.width;
        for (int px = 0; px < intrinsics.width; ++px) {
            detail::shade_pixel(caster, ctx, px, py, rgb_row + 3 * px, depth_row + px);
        }
    }
    return out;
}

RenderOutput render(const Scene& scene, const SphericalPose& pose,
                    const CameraIntrinsics& intrinsics) {
    return render(Raycaster(scene), pose, intrinsics);
}

}  // namespace viewplan
