#pragma once

#include <vector>

#include "viewplan/mesh.hpp"

namespace viewplan {

struct MetricsReport {
    double hausdorff_m = 0.0;
    double chamfer_m = 0.0;
    double coverage = 0.0;
    int view_count = 0;
    int baseline_view_count = 0;
    double epsilon_m = 0.0;
};

// One shared squared-distance kernel keeps the accelerated and
// brute-force paths bitwise identical.
inline double point_dist2(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
}

/// Uniform-grid nearest neighbor. Exact, not approximate: the ring
/// expansion only stops once no farther cell can hold a closer point,
/// so results equal brute force bitwise.
class NearestNeighborGrid {
public:
    explicit NearestNeighborGrid(const std::vector<Eigen::Vector3d>& points);

    double nearest_dist2(const Eigen::Vector3d& query) const;
    size_t size() const { return points_->size(); }

private:
    const std::vector<Eigen::Vector3d>* points_;
    Eigen::Vector3d lo_;
    double cell_ = 1.0;
    Eigen::Vector3i dims_{1, 1, 1};
    std::vector<int> cell_start_;
    std::vector<int> order_;

    int cell_of(double v, int axis) const;
};

/// Symmetric Hausdorff distance, meters. Throws std::domain_error on an
/// empty cloud.
double hausdorff(const PointCloud& a, const PointCloud& b);

/// Symmetric unsquared Chamfer discrepancy (mean of nearest-neighbor
/// distances, averaged over both directions), meters.
double chamfer(const PointCloud& a, const PointCloud& b);

/// Fraction of baseline points with a reconstruction point within
/// epsilon. Empty reconstruction scores 0; empty baseline is an error.
double coverage(const PointCloud& recon, const PointCloud& baseline, double epsilon_m);

}  // namespace viewplan
