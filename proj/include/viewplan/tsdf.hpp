#pragma once

#include <vector>

#include "viewplan/geometry.hpp"
#include "viewplan/image.hpp"
#include "viewplan/mesh.hpp"

namespace viewplan {

/// Dense voxel grid of truncated signed distances fused by weighted
/// running averages. tsdf starts at 1, weight 0 marks never-observed.
class TsdfVolume {
public:
    TsdfVolume(const Eigen::Vector3d& origin, double voxel_size, const Eigen::Vector3i& dims,
               double truncation_m);

    /// Cube of side 2.2x the scene bounding radius centered at the
    /// origin; truncation in voxel units (default 5).
    static TsdfVolume for_scene(double bounding_radius, int voxels_per_axis,
                                double truncation_voxels = 5.0);

    /// Projective TSDF update: every voxel projecting onto a valid
    /// depth pixel with sdf >= -truncation absorbs clamp(sdf/truncation)
    /// with unit weight; colors average identically. Parallel over z
    /// slabs, result independent of the partitioning.
    void integrate(const ImageU8& rgb, const ImageF32& depth_m, const CameraIntrinsics& intrinsics,
                   const RigidTransform& camera_to_world);

    /// Marching cubes over fully observed cells at iso tsdf = 0.
    TriangleMesh extract_mesh() const;

    /// One point per zero-crossing voxel, interpolated toward the
    /// crossings on its +axis edges.
    PointCloud extract_pointcloud() const;

    const Eigen::Vector3d& origin() const { return origin_; }
    double voxel_size() const { return voxel_size_; }
    const Eigen::Vector3i& dims() const { return dims_; }
    double truncation() const { return truncation_; }

    size_t index(int x, int y, int z) const {
        return (size_t(z) * dims_.y() + y) * dims_.x() + x;
    }
    float tsdf_at(int x, int y, int z) const { return tsdf_[index(x, y, z)]; }
    float weight_at(int x, int y, int z) const { return weight_[index(x, y, z)]; }
    Eigen::Vector3d voxel_center(int x, int y, int z) const {
        return origin_ + voxel_size_ * Eigen::Vector3d(x + 0.5, y + 0.5, z + 0.5);
    }

    // Mutable access for tests that write analytic fields.
    void set_voxel(int x, int y, int z, float tsdf, float weight);

    std::array<uint8_t, 3> color_at(int x, int y, int z) const;

private:
    friend void integrate_slab(TsdfVolume&, const ImageU8&, const ImageF32&,
                               const CameraIntrinsics&, const RigidTransform&, int, int);

    Eigen::Vector3d origin_;
    double voxel_size_;
    Eigen::Vector3i dims_;
    double truncation_;
    std::vector<float> tsdf_;
    std::vector<float> weight_;
    std::vector<float> color_;  // 3 accumulators per voxel
};

/// Shared per-slab kernel (z range [z0, z1)); the OpenMP integrate and
/// the serial reference both call this.
void integrate_slab(TsdfVolume& volume, const ImageU8& rgb, const ImageF32& depth_m,
                    const CameraIntrinsics& intrinsics, const RigidTransform& camera_to_world,
                    int z0, int z1);

namespace detail {

/// Marching-cubes case triangulation, built once from cube topology:
/// cut edges are paired per face (arcs separate inside corners on
/// ambiguous faces), walked into loops, fan-triangulated, and oriented
/// toward positive values.
struct McCase {
    // Each triangle is three cube-edge indices (0..11).
    std::vector<std::array<int, 3>> triangles;
};
const std::array<McCase, 256>& marching_cubes_table();

}  // namespace detail

}  // namespace viewplan
