#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viewplan/image.hpp"

namespace viewplan {

struct Keypoint {
    float x = 0.0f;  // sub-pixel image coordinates
    float y = 0.0f;
    float scale = 0.0f;        // pixels
    float orientation = 0.0f;  // radians, [0, 2*pi)
    float response = 0.0f;
};

/// m x n descriptor matrix plus its keypoints. Rows are L2-normalized,
/// non-negative, and ordered by scale descending, then y, then x.
struct DescriptorSet {
    int count = 0;
    int dim = 128;
    std::vector<float> data;  // count * dim, row-major
    std::vector<Keypoint> keypoints;

    std::span<const float> row(int i) const {
        return {data.data() + size_t(i) * dim, size_t(dim)};
    }
    bool empty() const { return count == 0; }
};

/// Swappable extractor interface; the pipeline only depends on this.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual DescriptorSet extract(const ImageGray8& image) const = 0;
};

// Per-view descriptor cache: little-endian binary, header {magic, m, n}
// followed by m*n float32. Keypoints are not cached; consumers of the
// cache only need the matrix.
void write_descriptor_cache(const std::string& path, const DescriptorSet& set);
std::optional<DescriptorSet> read_descriptor_cache(const std::string& path);

}  // namespace viewplan
