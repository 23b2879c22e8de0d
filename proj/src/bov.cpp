#include "viewplan/bov.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "viewplan/kmeans.hpp"

namespace viewplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

std::string base64_encode(const uint8_t* data, size_t len) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (size_t i = 0; i < len; i += 3) {
        uint32_t chunk = uint32_t(data[i]) << 16;
        if (i + 1 < len) chunk |= uint32_t(data[i + 1]) << 8;
        if (i + 2 < len) chunk |= uint32_t(data[i + 2]);
        out.push_back(alphabet[(chunk >> 18) & 63]);
        out.push_back(alphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < len ? alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? alphabet[chunk & 63] : '=');
    }
    return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw std::runtime_error("base64: invalid character");
    };
    std::vector<uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i + 3 < text.size(); i += 4) {
        const int a = value(text[i]), b = value(text[i + 1]);
        const int c = value(text[i + 2]), d = value(text[i + 3]);
        if (a < 0 || b < 0) throw std::runtime_error("base64: malformed input");
        out.push_back(uint8_t(a << 2 | b >> 4));
        if (c >= 0) out.push_back(uint8_t((b & 15) << 4 | c >> 2));
        if (c >= 0 && d >= 0) out.push_back(uint8_t((c & 3) << 6 | d));
    }
    return out;
}

}  // namespace

void BovConfig::validate() const {
    if (regions < 1) throw std::invalid_argument("BovConfig: regions must be >= 1");
    if (words_per_region < 1) throw std::invalid_argument("BovConfig: words must be >= 1");
    if (!(distance_coefficient > 0.0)) {
        throw std::invalid_argument("BovConfig: distance coefficient must be > 0");
    }
    if (kmeans_max_iters < 1) throw std::invalid_argument("BovConfig: kmeans iters must be >= 1");
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("cosine_similarity: dimension mismatch");
    }
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) {
        throw std::domain_error("cosine_similarity: zero-norm vector");
    }
    return dot(a, b) / (na * nb);
}

double descriptor_distance(std::span<const float> a, std::span<const float> b,
                           double coefficient) {
    return 1.0 - coefficient * cosine_similarity(a, b);
}

QuantizeResult quantize(std::span<const float> descriptor, const Vocabulary& vocab,
                        double coefficient) {
    if (vocab.empty()) {
        throw std::domain_error("quantize: empty vocabulary");
    }
    int best = 0;
    double best_cos = -kInf;
    for (int w = 0; w < vocab.word_count; ++w) {
        const double c = cosine_similarity(descriptor, vocab.word(w));
        if (c > best_cos) {  // ties keep the lowest index
            best_cos = c;
            best = w;
        }
    }
    return {best, 1.0 - coefficient * best_cos};
}

double view_utility(const DescriptorSet& descriptors, const Vocabulary& vocab,
                    double coefficient) {
    if (vocab.empty()) return kInf;
    if (descriptors.empty()) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < descriptors.count; ++i) {
        sum += quantize(descriptors.row(i), vocab, coefficient).distance;
    }
    return sum;
}

void update_vocabulary(Vocabulary& vocab, const DescriptorSet& descriptors,
                       const BovConfig& config) {
    if (descriptors.count > 0) {
        if (descriptors.dim != vocab.dim) {
            throw std::invalid_argument("update_vocabulary: descriptor dimension mismatch");
        }
        vocab.pool.insert(vocab.pool.end(), descriptors.data.begin(), descriptors.data.end());
        vocab.pool_rows += size_t(descriptors.count);
        if (config.pool_cap > 0 && vocab.pool_rows > config.pool_cap) {
            const size_t evict = vocab.pool_rows - config.pool_cap;
            vocab.pool.erase(vocab.pool.begin(),
                             vocab.pool.begin() + ptrdiff_t(evict * size_t(vocab.dim)));
            vocab.pool_rows = config.pool_cap;
        }
    }
    if (vocab.pool_rows == 0) return;

    const int k = int(std::min<size_t>(config.words_per_region, vocab.pool_rows));
    KmeansResult km = kmeans(vocab.pool, int(vocab.pool_rows), vocab.dim, k, config.kmeans_seed,
                             config.kmeans_max_iters);
    // Means of unit vectors are not unit vectors; renormalize so the
    // cosine range guarantees hold.
    for (int w = 0; w < k; ++w) {
        float* word = km.centers.data() + size_t(w) * vocab.dim;
        double norm2 = 0.0;
        for (int j = 0; j < vocab.dim; ++j) norm2 += double(word[j]) * word[j];
        if (norm2 > 0.0) {
            const float inv = float(1.0 / std::sqrt(norm2));
            for (int j = 0; j < vocab.dim; ++j) word[j] *= inv;
        }
    }
    vocab.words = std::move(km.centers);
    vocab.word_count = k;
}

double vocabulary_change(const Vocabulary& v_new, const Vocabulary& v_old, double coefficient) {
    if (v_new.empty() || v_old.empty()) return kInf;
    double sum = 0.0;
    for (int i = 0; i < v_new.word_count; ++i) {
        double best_cos = -kInf;
        for (int j = 0; j < v_old.word_count; ++j) {
            best_cos = std::max(best_cos, cosine_similarity(v_new.word(i), v_old.word(j)));
        }
        sum += 1.0 - coefficient * best_cos;
    }
    return sum;
}

BagOfViews::BagOfViews(BovConfig config) : config_(config) {
    config_.validate();
    vocabularies_.resize(config_.regions);
    for (int i = 0; i < config_.regions; ++i) {
        vocabularies_[i].region = i;
    }
}

double BagOfViews::utility(int region, const DescriptorSet& descriptors) const {
    return view_utility(descriptors, vocabularies_.at(region), config_.distance_coefficient);
}

void BagOfViews::update(int region, const DescriptorSet& descriptors) {
    update_vocabulary(vocabularies_.at(region), descriptors, config_);
}

std::string BagOfViews::to_json_string() const {
    nlohmann::json j;
    j["config"] = {{"regions", config_.regions},
                   {"words_per_region", config_.words_per_region},
                   {"distance_coefficient", config_.distance_coefficient},
                   {"kmeans_seed", config_.kmeans_seed},
                   {"kmeans_max_iters", config_.kmeans_max_iters},
                   {"pool_cap", config_.pool_cap}};
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& v : vocabularies_) {
        regions.push_back(
            {{"region_id", v.region},
             {"dim", v.dim},
             {"word_count", v.word_count},
             {"words_b64",
              base64_encode(reinterpret_cast<const uint8_t*>(v.words.data()),
                            v.words.size() * sizeof(float))},
             {"pool_size", v.pool_rows}});
    }
    j["regions"] = std::move(regions);
    return j.dump(2);
}

BagOfViews BagOfViews::from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    BovConfig config;
    const auto& jc = j.at("config");
    config.regions = jc.at("regions").get<int>();
    config.words_per_region = jc.at("words_per_region").get<int>();
    config.distance_coefficient = jc.at("distance_coefficient").get<double>();
    config.kmeans_seed = jc.at("kmeans_seed").get<uint64_t>();
    config.kmeans_max_iters = jc.at("kmeans_max_iters").get<int>();
    config.pool_cap = jc.at("pool_cap").get<size_t>();

    BagOfViews bov(config);
    for (const auto& jr : j.at("regions")) {
        const int region = jr.at("region_id").get<int>();
        Vocabulary& v = bov.vocabularies_.at(region);
        v.dim = jr.at("dim").get<int>();
        v.word_count = jr.at("word_count").get<int>();
        const std::vector<uint8_t> bytes = base64_decode(jr.at("words_b64").get<std::string>());
        if (bytes.size() != size_t(v.word_count) * v.dim * sizeof(float)) {
            throw std::runtime_error("BagOfViews: word matrix size mismatch");
        }
        v.words.resize(size_t(v.word_count) * v.dim);
        std::memcpy(v.words.data(), bytes.data(), bytes.size());
        v.pool_rows = jr.at("pool_size").get<size_t>();
    }
    return bov;
}

RefineResult refine_dataset(std::span<const RefineView> views,
                            const std::function<DescriptorSet(const RefineView&)>& descriptors_for,
                            const BovConfig& config) {
    config.validate();
    if (views.empty()) {
        throw std::invalid_argument("refine_dataset: empty dataset");
    }
    RefineResult result{{}, {}, {}, BagOfViews(config)};
    result.accepted.reserve(views.size());
    result.utilities.reserve(views.size());

    for (const RefineView& view : views) {
        DescriptorSet descriptors;
        try {
            descriptors = descriptors_for(view);
        } catch (const std::exception& e) {
            throw std::runtime_error("refine_dataset: view " + std::to_string(view.id) + ": " +
                                     e.what());
        }
        const int region = result.bov.region_of(view.pose);
        const double utility = result.bov.utility(region, descriptors);
        const bool accept = utility > 0.0;  // +inf bootstrap included
        if (accept) {
            result.bov.update(region, descriptors);
            result.accepted_ids.push_back(view.id);
        }
        result.accepted.push_back(accept ? 1 : 0);
        result.utilities.push_back(utility);
    }
    return result;
}

}  // namespace viewplan
