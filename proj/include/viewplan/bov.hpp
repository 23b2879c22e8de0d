#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "viewplan/features.hpp"
#include "viewplan/geometry.hpp"

namespace viewplan {

struct BovConfig {
    int regions = 9;                    // N, azimuth bins
    int words_per_region = 30;          // W
    double distance_coefficient = 2.0;  // the 2 in 1 - 2*cos
    uint64_t kmeans_seed = 0;
    int kmeans_max_iters = 25;
    size_t pool_cap = 0;  // descriptors per region, 0 = unbounded

    void validate() const;  // throws std::invalid_argument
};

/// Regional visual vocabulary: k-means words over the descriptors
/// pooled from every accepted view of one azimuth range.
struct Vocabulary {
    int region = 0;
    int dim = 128;
    int word_count = 0;
    std::vector<float> words;  // word_count * dim, rows L2-normalized
    std::vector<float> pool;   // pool_rows * dim
    size_t pool_rows = 0;

    bool empty() const { return word_count == 0; }
    std::span<const float> word(int i) const {
        return {words.data() + size_t(i) * dim, size_t(dim)};
    }
};

struct QuantizeResult {
    int word = 0;
    double distance = 0.0;
};

/// <a,b> / (|a| |b|); throws std::domain_error on a zero-norm vector.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

/// 1 - coefficient * cos(a, b). With coefficient 2 and non-negative
/// unit descriptors the range is [-1, 1].
double descriptor_distance(std::span<const float> a, std::span<const float> b,
                           double coefficient);

/// Most-similar word by cosine, lowest index on ties; throws
/// std::domain_error on an empty vocabulary (the bootstrap case is
/// handled by view_utility).
QuantizeResult quantize(std::span<const float> descriptor, const Vocabulary& vocab,
                        double coefficient);

/// Sum of quantized distances over all descriptors. Empty vocabulary
/// yields +infinity (everything is novel); an empty descriptor set
/// yields 0.
double view_utility(const DescriptorSet& descriptors, const Vocabulary& vocab,
                    double coefficient);

/// Appends the descriptors to the region pool (FIFO-evicting past the
/// cap) and recomputes the words with seeded k-means, k = min(W, pool).
/// Words are L2-renormalized afterwards.
void update_vocabulary(Vocabulary& vocab, const DescriptorSet& descriptors,
                       const BovConfig& config);

/// Sum over the new vocabulary's words of 1 - coeff*cos to the closest
/// old word. Either side empty yields the +infinity bootstrap sentinel.
double vocabulary_change(const Vocabulary& v_new, const Vocabulary& v_old, double coefficient);

class BagOfViews {
public:
    explicit BagOfViews(BovConfig config);

    const BovConfig& config() const { return config_; }
    int region_count() const { return int(vocabularies_.size()); }
    const Vocabulary& vocabulary(int region) const { return vocabularies_.at(region); }

    int region_of(const SphericalPose& pose) const { return region_id(pose, config_.regions); }
    double utility(int region, const DescriptorSet& descriptors) const;
    void update(int region, const DescriptorSet& descriptors);

    /// Config plus per-region word matrices (base64 float32); reloaded
    /// models reproduce quantization bitwise. Pools are not persisted,
    /// only their sizes.
    std::string to_json_string() const;
    static BagOfViews from_json_string(const std::string& text);

private:
    BovConfig config_;
    std::vector<Vocabulary> vocabularies_;
};

struct RefineView {
    int id = 0;
    SphericalPose pose;
};

struct RefineResult {
    std::vector<int> accepted_ids;
    std::vector<char> accepted;      // per input view
    std::vector<double> utilities;   // per input view
    BagOfViews bov;
};

/// Offline dataset refinement: views are scored in order against their
/// region vocabulary; a view is accepted (and absorbed) when its
/// utility is positive or the region is still empty. Provider failures
/// abort with the failing view id in the message.
RefineResult refine_dataset(std::span<const RefineView> views,
                            const std::function<DescriptorSet(const RefineView&)>& descriptors_for,
                            const BovConfig& config);

}  // namespace viewplan
