#pragma once

#include "viewplan/features.hpp"

namespace viewplan {

/// Canonical difference-of-Gaussians parameters; frozen defaults, only
/// the keypoint cap is expected to vary between runs.
struct SiftParams {
    int octaves = 4;
    int scales_per_octave = 3;
    float sigma0 = 1.6f;
    float assumed_input_blur = 0.5f;
    float contrast_threshold = 0.03f;
    float edge_ratio = 10.0f;
    int max_keypoints = 1000;  // strongest by contrast response
    int border = 5;
};

class SiftExtractor final : public FeatureExtractor {
public:
    explicit SiftExtractor(SiftParams params = {});

    /// Requires at least 32x32 input. Deterministic: identical images
    /// produce identical descriptor matrices, independent of thread
    /// count.
    DescriptorSet extract(const ImageGray8& image) const override;

    const SiftParams& params() const { return params_; }

private:
    SiftParams params_;
};

}  // namespace viewplan
