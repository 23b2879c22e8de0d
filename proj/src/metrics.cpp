#include "viewplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace viewplan {

NearestNeighborGrid::NearestNeighborGrid(const std::vector<Eigen::Vector3d>& points)
    : points_(&points) {
    if (points.empty()) {
        throw std::domain_error("NearestNeighborGrid: empty point set");
    }
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
    Eigen::Vector3d hi = -lo;
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    lo_ = lo;
    const Eigen::Vector3d extent = hi - lo;
    const int target = std::max(1, int(std::cbrt(double(points.size()))));
    cell_ = std::max(extent.maxCoeff() / target, 1e-12);
    for (int a = 0; a < 3; ++a) {
        dims_[a] = std::max(1, int(std::floor(extent[a] / cell_)) + 1);
    }

    const size_t cells = size_t(dims_.x()) * dims_.y() * dims_.z();
    std::vector<int> counts(cells, 0);
    auto cell_index = [&](const Eigen::Vector3d& p) {
        const int cx = cell_of(p.x(), 0), cy = cell_of(p.y(), 1), cz = cell_of(p.z(), 2);
        return (size_t(cz) * dims_.y() + cy) * dims_.x() + cx;
    };
    for (const auto& p : points) ++counts[cell_index(p)];
    cell_start_.assign(cells + 1, 0);
    for (size_t c = 0; c < cells; ++c) cell_start_[c + 1] = cell_start_[c] + counts[c];
    order_.resize(points.size());
    std::vector<int> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (size_t i = 0; i < points.size(); ++i) {
        order_[cursor[cell_index(points[i])]++] = int(i);
    }
}

int NearestNeighborGrid::cell_of(double v, int axis) const {
    int c = int(std::floor((v - lo_[axis]) / cell_));
    return std::clamp(c, 0, dims_[axis] - 1);
}

double NearestNeighborGrid::nearest_dist2(const Eigen::Vector3d& query) const {
    const std::vector<Eigen::Vector3d>& pts = *points_;
    const int qx = cell_of(query.x(), 0), qy = cell_of(query.y(), 1), qz = cell_of(query.z(), 2);
    const int max_ring = dims_.maxCoeff();

    double best = std::numeric_limits<double>::max();
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Any cell at Chebyshev ring r is at least (r-1) cells away, so
        // once best fits inside that bound no farther ring can win.
        if (ring > 1) {
            const double safe = (ring - 1) * cell_;
            if (best <= safe * safe) break;
        }
        const int x0 = qx - ring, x1 = qx + ring;
        const int y0 = qy - ring, y1 = qy + ring;
        const int z0 = qz - ring, z1 = qz + ring;
        for (int cz = std::max(z0, 0); cz <= std::min(z1, dims_.z() - 1); ++cz) {
            for (int cy = std::max(y0, 0); cy <= std::min(y1, dims_.y() - 1); ++cy) {
                for (int cx = std::max(x0, 0); cx <= std::min(x1, dims_.x() - 1); ++cx) {
                    const bool shell = cx == x0 || cx == x1 || cy == y0 || cy == y1 ||
                                       cz == z0 || cz == z1;
                    if (!shell) continue;
                    const size_t c = (size_t(cz) * dims_.y() + cy) * dims_.x() + cx;
                    for (int i = cell_start_[c]; i < cell_start_[c + 1]; ++i) {
                        best = std::min(best, point_dist2(query, pts[order_[i]]));
                    }
                }
            }
        }
    }
    return best;
}

namespace {

// Per-point nearest distances (parallel fill, deterministic), reduced
// serially in index order.
std::vector<double> nearest_distances(const std::vector<Eigen::Vector3d>& from,
                                      const NearestNeighborGrid& target) {
    std::vector<double> d(from.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(from.size()); ++i) {
        d[i] = std::sqrt(target.nearest_dist2(from[i]));
    }
    return d;
}

void require_non_empty(const PointCloud& a, const PointCloud& b, const char* who) {
    if (a.empty() || b.empty()) {
        throw std::domain_error(std::string(who) + ": empty point cloud");
    }
}

}  // namespace

double hausdorff(const PointCloud& a, const PointCloud& b) {
    require_non_empty(a, b, "hausdorff");
    const NearestNeighborGrid ga(a.points), gb(b.points);
    double worst = 0.0;
    for (const double d : nearest_distances(a.points, gb)) worst = std::max(worst, d);
    for (const double d : nearest_distances(b.points, ga)) worst = std::max(worst, d);
    return worst;
}

double chamfer(const PointCloud& a, const PointCloud& b) {
    require_non_empty(a, b, "chamfer");
    const NearestNeighborGrid ga(a.points), gb(b.points);
    double sum_a = 0.0, sum_b = 0.0;
    for (const double d : nearest_distances(a.points, gb)) sum_a += d;
    for (const double d : nearest_distances(b.points, ga)) sum_b += d;
    return 0.5 * (sum_a / double(a.points.size()) + sum_b / double(b.points.size()));
}

double coverage(const PointCloud& recon, const PointCloud& baseline, double epsilon_m) {
    if (baseline.empty()) {
        throw std::domain_error("coverage: empty baseline cloud");
    }
    if (recon.empty()) return 0.0;
    const NearestNeighborGrid grid(recon.points);
    const std::vector<double> d = nearest_distances(baseline.points, grid);
    size_t hit = 0;
    for (const double di : d) {
        if (di <= epsilon_m) ++hit;
    }
    return double(hit) / double(baseline.points.size());
}

}  // namespace viewplan
