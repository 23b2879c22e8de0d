#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace viewplan {

struct KmeansResult {
    int k = 0;
    int dim = 0;
    std::vector<float> centers;     // k * dim
    std::vector<int> assignment;    // per input point
    int iterations = 0;
};

/// Seeded k-means++ initialization followed by Lloyd iterations until
/// the assignment reaches a fixpoint or max_iters. Empty clusters are
/// re-seeded with the point farthest from its assigned center. Fully
/// deterministic, independent of thread count.
///
/// Throws std::invalid_argument when points are empty or k > #points.
KmeansResult kmeans(std::span<const float> points, int count, int dim, int k, uint64_t seed,
                    int max_iters);

}  // namespace viewplan
