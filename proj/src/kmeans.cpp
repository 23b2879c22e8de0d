#include "viewplan/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace viewplan {

namespace {

inline double dist2(const float* a, const float* b, int dim) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = double(a[i]) - double(b[i]);
        acc += d * d;
    }
    return acc;
}

// mt19937_64 output mapped by hand; std:: distributions are not
// reproducible across standard libraries.
inline double uniform01(std::mt19937_64& gen) { return double(gen() >> 11) * 0x1.0p-53; }

}  // namespace

KmeansResult kmeans(std::span<const float> points, int count, int dim, int k, uint64_t seed,
                    int max_iters) {
    if (count < 1 || dim < 1 || int(points.size()) != count * dim) {
        throw std::invalid_argument("kmeans: empty or inconsistent point matrix");
    }
    if (k < 1 || k > count) {
        throw std::invalid_argument("kmeans: need 1 <= k <= #points");
    }

    KmeansResult result;
    result.k = k;
    result.dim = dim;
    result.centers.resize(size_t(k) * dim);
    result.assignment.assign(count, -1);

    std::mt19937_64 gen(seed);
    const float* pts = points.data();
    auto point = [&](int i) { return pts + size_t(i) * dim; };
    auto center = [&](int c) { return result.centers.data() + size_t(c) * dim; };

    // k-means++ seeding: first center uniform, then D^2-weighted picks.
    std::vector<double> d2(count);
    {
        const int first = int(gen() % uint64_t(count));
        std::copy_n(point(first), dim, center(0));
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) d2[i] = dist2(point(i), center(0), dim);

        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (int i = 0; i < count; ++i) total += d2[i];
            int chosen = -1;
            if (total > 0.0) {
                const double r = uniform01(gen) * total;
                double acc = 0.0;
                for (int i = 0; i < count; ++i) {
                    acc += d2[i];
                    if (acc >= r) {
                        chosen = i;
                        break;
                    }
                }
                if (chosen < 0) chosen = count - 1;
            } else {
                // All remaining mass at zero distance; take the lowest
                // index so duplicates stay deterministic.
                chosen = int((c - 1) % count);
            }
            std::copy_n(point(chosen), dim, center(c));
#pragma omp parallel for schedule(static)
            for (int i = 0; i < count; ++i) {
                d2[i] = std::min(d2[i], dist2(point(i), center(c), dim));
            }
        }
    }

    std::vector<int> previous(count, -2);
    std::vector<double> sums(size_t(k) * dim);
    std::vector<int> sizes(k);
    std::vector<double> point_d2(count);

    for (int iter = 0; iter < max_iters; ++iter) {
        result.iterations = iter + 1;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) {
            double best = std::numeric_limits<double>::max();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double d = dist2(point(i), center(c), dim);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            result.assignment[i] = best_c;
            point_d2[i] = best;
        }
        if (result.assignment == previous) break;
        previous = result.assignment;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int i = 0; i < count; ++i) {
            const int c = result.assignment[i];
            ++sizes[c];
            double* sum = sums.data() + size_t(c) * dim;
            const float* p = point(i);
            for (int j = 0; j < dim; ++j) sum[j] += p[j];
        }

        std::vector<char> taken(count, 0);
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) {
                const double inv = 1.0 / sizes[c];
                const double* sum = sums.data() + size_t(c) * dim;
                float* ctr = center(c);
                for (int j = 0; j < dim; ++j) ctr[j] = float(sum[j] * inv);
            } else {
                // Re-seed with the farthest point from its center.
                int far = -1;
                double far_d = -1.0;
                for (int i = 0; i < count; ++i) {
                    if (!taken[i] && point_d2[i] > far_d) {
                        far_d = point_d2[i];
                        far = i;
                    }
                }
                taken[far] = 1;
                std::copy_n(point(far), dim, center(c));
            }
        }
    }
    return result;
}

}  // namespace viewplan
