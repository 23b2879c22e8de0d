#include "viewplan/tsdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace viewplan {

TsdfVolume::TsdfVolume(const Eigen::Vector3d& origin, double voxel_size,
                       const Eigen::Vector3i& dims, double truncation_m)
    : origin_(origin), voxel_size_(voxel_size), dims_(dims), truncation_(truncation_m) {
    if (dims.minCoeff() < 2 || !(voxel_size > 0.0) || !(truncation_m > 0.0)) {
        throw std::invalid_argument("TsdfVolume: bad dimensions");
    }
    const size_t n = size_t(dims.x()) * dims.y() * dims.z();
    tsdf_.assign(n, 1.0f);
    weight_.assign(n, 0.0f);
    color_.assign(n * 3, 0.0f);
}

TsdfVolume TsdfVolume::for_scene(double bounding_radius, int voxels_per_axis,
                                 double truncation_voxels) {
    const double side = 2.2 * bounding_radius;
    const double voxel = side / voxels_per_axis;
    const Eigen::Vector3d origin = Eigen::Vector3d::Constant(-0.5 * side);
    return TsdfVolume(origin, voxel, Eigen::Vector3i::Constant(voxels_per_axis),
                      truncation_voxels * voxel);
}

void TsdfVolume::set_voxel(int x, int y, int z, float tsdf, float weight) {
    const size_t i = index(x, y, z);
    tsdf_[i] = tsdf;
    weight_[i] = weight;
}

std::array<uint8_t, 3> TsdfVolume::color_at(int x, int y, int z) const {
    const size_t i = index(x, y, z);
    if (weight_[i] <= 0.0f) return {0, 0, 0};
    std::array<uint8_t, 3> out;
    for (int c = 0; c < 3; ++c) {
        out[c] = uint8_t(std::clamp<long>(std::lround(color_[3 * i + c]), 0, 255));
    }
    return out;
}

void integrate_slab(TsdfVolume& v, const ImageU8& rgb, const ImageF32& depth_m,
                    const CameraIntrinsics& intr, const RigidTransform& camera_to_world, int z0,
                    int z1) {
    const RigidTransform world_to_cam = camera_to_world.inverse();
    const Eigen::Matrix3d rot = world_to_cam.rotation();
    const Eigen::Vector3d trans = world_to_cam.translation();
    const double fx = intr.fx(), fy = intr.fy(), cx = intr.cx(), cy = intr.cy();
    const double trunc = v.truncation();

    for (int z = z0; z < z1; ++z) {
        for (int y = 0; y < v.dims_.y(); ++y) {
            for (int x = 0; x < v.dims_.x(); ++x) {
                const Eigen::Vector3d pc = rot * v.voxel_center(x, y, z) + trans;
                if (pc.z() <= 0.0) continue;
                const int px = int(std::floor(fx * pc.x() / pc.z() + cx));
                const int py = int(std::floor(fy * pc.y() / pc.z() + cy));
                if (px < 0 || px >= depth_m.width || py < 0 || py >= depth_m.height) continue;
                const float d = depth_m.at(px, py);
                if (d <= 0.0f) continue;  // sentinel
                const double sdf = double(d) - pc.z();
                if (sdf < -trunc) continue;
                const float obs = float(std::clamp(sdf / trunc, -1.0, 1.0));

                const size_t i = v.index(x, y, z);
                const float w = v.weight_[i];
                const float w_new = w + 1.0f;
                v.tsdf_[i] = (v.tsdf_[i] * w + obs) / w_new;
                for (int c = 0; c < 3; ++c) {
                    v.color_[3 * i + c] =
                        (v.color_[3 * i + c] * w + float(rgb.at(px, py, c))) / w_new;
                }
                v.weight_[i] = w_new;
            }
        }
    }
}

void TsdfVolume::integrate(const ImageU8& rgb, const ImageF32& depth_m,
                           const CameraIntrinsics& intrinsics,
                           const RigidTransform& camera_to_world) {
    intrinsics.validate();
    if (rgb.width != intrinsics.width || rgb.height != intrinsics.height ||
        depth_m.width != intrinsics.width || depth_m.height != intrinsics.height ||
        rgb.channels != 3) {
        throw std::invalid_argument("TsdfVolume::integrate: image dimensions do not match intrinsics");
    }
    if (!camera_to_world.is_rigid()) {
        throw std::invalid_argument("TsdfVolume::integrate: transform is not rigid");
    }
#pragma omp parallel for schedule(static)
    for (int z = 0; z < dims_.z(); ++z) {
        integrate_slab(*this, rgb, depth_m, intrinsics, camera_to_world, z, z + 1);
    }
}

namespace {

// Corner c of cell (x,y,z) lies at voxel (x + bit0, y + bit1, z + bit2).
constexpr int kEdgeCorners[12][2] = {
    {0, 1}, {1, 3}, {3, 2}, {2, 0}, {4, 5}, {5, 7},
    {7, 6}, {6, 4}, {0, 4}, {1, 5}, {3, 7}, {2, 6},
};

inline std::array<uint8_t, 3> lerp_color(const std::array<uint8_t, 3>& a,
                                         const std::array<uint8_t, 3>& b, double t) {
    std::array<uint8_t, 3> out;
    for (int c = 0; c < 3; ++c) {
        out[c] = uint8_t(std::clamp<long>(std::lround((1.0 - t) * a[c] + t * b[c]), 0, 255));
    }
    return out;
}

}  // namespace

TriangleMesh TsdfVolume::extract_mesh() const {
    const auto& table = detail::marching_cubes_table();
    TriangleMesh mesh;
    std::unordered_map<size_t, int> edge_vertex;  // global edge key -> vertex index

    float corner_val[8];
    for (int z = 0; z + 1 < dims_.z(); ++z) {
        for (int y = 0; y + 1 < dims_.y(); ++y) {
            for (int x = 0; x + 1 < dims_.x(); ++x) {
                int config = 0;
                bool observed = true;
                for (int c = 0; c < 8; ++c) {
                    const int vx = x + (c & 1), vy = y + (c >> 1 & 1), vz = z + (c >> 2 & 1);
                    const size_t i = index(vx, vy, vz);
                    if (weight_[i] <= 0.0f) {
                        observed = false;
                        break;
                    }
                    corner_val[c] = tsdf_[i];
                    if (tsdf_[i] < 0.0f) config |= 1 << c;
                }
                if (!observed || config == 0 || config == 255) continue;

                for (const auto& tri : table[config].triangles) {
                    int idx[3];
                    for (int k = 0; k < 3; ++k) {
                        const int e = tri[k];
                        const int ca = kEdgeCorners[e][0], cb = kEdgeCorners[e][1];
                        const int base = ca & cb;
                        const int axis = (ca ^ cb) == 1 ? 0 : (ca ^ cb) == 2 ? 1 : 2;
                        const int bx = x + (base & 1), by = y + (base >> 1 & 1),
                                  bz = z + (base >> 2 & 1);
                        const size_t key = index(bx, by, bz) * 3 + axis;

                        const auto found = edge_vertex.find(key);
                        if (found != edge_vertex.end()) {
                            idx[k] = found->second;
                            continue;
                        }
                        const double va = corner_val[ca], vb = corner_val[cb];
                        const double t = va / (va - vb);
                        Eigen::Vector3d pa = voxel_center(x + (ca & 1), y + (ca >> 1 & 1),
                                                          z + (ca >> 2 & 1));
                        Eigen::Vector3d pb = voxel_center(x + (cb & 1), y + (cb >> 1 & 1),
                                                          z + (cb >> 2 & 1));
                        idx[k] = int(mesh.vertices.size());
                        mesh.vertices.push_back(pa + t * (pb - pa));
                        mesh.colors.push_back(lerp_color(
                            color_at(x + (ca & 1), y + (ca >> 1 & 1), z + (ca >> 2 & 1)),
                            color_at(x + (cb & 1), y + (cb >> 1 & 1), z + (cb >> 2 & 1)), t));
                        edge_vertex.emplace(key, idx[k]);
                    }
                    if (idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2]) {
                        mesh.triangles.push_back({idx[0], idx[1], idx[2]});
                    }
                }
            }
        }
    }
    return mesh;
}

PointCloud TsdfVolume::extract_pointcloud() const {
    PointCloud cloud;
    for (int z = 0; z < dims_.z(); ++z) {
        for (int y = 0; y < dims_.y(); ++y) {
            for (int x = 0; x < dims_.x(); ++x) {
                const size_t i = index(x, y, z);
                if (weight_[i] <= 0.0f) continue;
                const float v0 = tsdf_[i];

                Eigen::Vector3d sum = Eigen::Vector3d::Zero();
                int crossings = 0;
                const int nx[3] = {x + 1, x, x};
                const int ny[3] = {y, y + 1, y};
                const int nz[3] = {z, z, z + 1};
                for (int a = 0; a < 3; ++a) {
                    if (nx[a] >= dims_.x() || ny[a] >= dims_.y() || nz[a] >= dims_.z()) continue;
                    const size_t j = index(nx[a], ny[a], nz[a]);
                    if (weight_[j] <= 0.0f) continue;
                    const float v1 = tsdf_[j];
                    if ((v0 < 0.0f) == (v1 < 0.0f)) continue;
                    const double t = double(v0) / (double(v0) - double(v1));
                    Eigen::Vector3d p = voxel_center(x, y, z);
                    p[a] += t * voxel_size_;
                    sum += p;
                    ++crossings;
                }
                if (crossings > 0) {
                    cloud.points.push_back(sum / double(crossings));
                    cloud.colors.push_back(color_at(x, y, z));
                }
            }
        }
    }
    return cloud;
}

}  // namespace viewplan
