#include "viewplan/sift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "viewplan/geometry.hpp"
#include "viewplan/sift_detail.hpp"

namespace viewplan {

namespace detail {

FloatImage to_float(const ImageGray8& image) {
    FloatImage out(image.width, image.height);
    for (size_t i = 0; i < image.data.size(); ++i) {
        out.data[i] = float(image.data[i]) * (1.0f / 255.0f);
    }
    return out;
}

std::vector<float> gaussian_kernel(float sigma) {
    const int radius = std::max(1, int(std::ceil(4.0f * sigma)));
    std::vector<float> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-double(i) * i / (2.0 * sigma * sigma));
        k[i + radius] = float(v);
        sum += v;
    }
    for (auto& v : k) v = float(v / sum);
    return k;
}

namespace {

inline void convolve_row_h(const FloatImage& src, const std::vector<float>& k, FloatImage& dst,
                           int y) {
    const int radius = int(k.size() / 2);
    const int w = src.width;
    const float* row = src.data.data() + size_t(y) * w;
    float* out = dst.data.data() + size_t(y) * w;
    for (int x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (int i = -radius; i <= radius; ++i) {
            const int xi = std::clamp(x + i, 0, w - 1);
            acc += row[xi] * k[i + radius];
        }
        out[x] = acc;
    }
}

inline void convolve_row_v(const FloatImage& src, const std::vector<float>& k, FloatImage& dst,
                           int y) {
    const int radius = int(k.size() / 2);
    const int w = src.width, h = src.height;
    float* out = dst.data.data() + size_t(y) * w;
    for (int x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (int i = -radius; i <= radius; ++i) {
            const int yi = std::clamp(y + i, 0, h - 1);
            acc += src.at(x, yi) * k[i + radius];
        }
        out[x] = acc;
    }
}

}  // namespace

FloatImage gaussian_blur(const FloatImage& src, float sigma, bool parallel) {
    const std::vector<float> k = gaussian_kernel(sigma);
    FloatImage tmp(src.width, src.height);
    FloatImage dst(src.width, src.height);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < src.height; ++y) convolve_row_h(src, k, tmp, y);
#pragma omp parallel for schedule(static)
        for (int y = 0; y < src.height; ++y) convolve_row_v(tmp, k, dst, y);
    } else {
        for (int y = 0; y < src.height; ++y) convolve_row_h(src, k, tmp, y);
        for (int y = 0; y < src.height; ++y) convolve_row_v(tmp, k, dst, y);
    }
    return dst;
}

FloatImage half_sample(const FloatImage& src) {
    FloatImage out(std::max(1, src.width / 2), std::max(1, src.height / 2));
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y) = src.at(2 * x, 2 * y);
        }
    }
    return out;
}

FloatImage subtract(const FloatImage& a, const FloatImage& b, bool parallel) {
    FloatImage out(a.width, a.height);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < a.height; ++y) {
            const size_t off = size_t(y) * a.width;
            for (int x = 0; x < a.width; ++x) {
                out.data[off + x] = a.data[off + x] - b.data[off + x];
            }
        }
    } else {
        for (size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
    }
    return out;
}

}  // namespace detail

namespace {

using detail::FloatImage;

constexpr int kOriBins = 36;
constexpr float kOriSigmaFactor = 1.5f;
constexpr float kOriPeakRatio = 0.8f;
constexpr int kDescrWidth = 4;
constexpr int kDescrBins = 8;
constexpr float kDescrSclFactor = 3.0f;
constexpr float kDescrMagThreshold = 0.2f;
constexpr int kMaxInterpSteps = 5;

struct Pyramid {
    int octaves = 0;
    int intervals = 0;  // scales per octave
    std::vector<FloatImage> gauss;  // octaves * (intervals + 3)
    std::vector<FloatImage> dog;    // octaves * (intervals + 2)

    const FloatImage& g(int o, int i) const { return gauss[size_t(o) * (intervals + 3) + i]; }
    const FloatImage& d(int o, int i) const { return dog[size_t(o) * (intervals + 2) + i]; }
};

// Internal candidate carrying octave-frame coordinates.
struct OctaveKeypoint {
    int octave = 0;
    int layer = 0;
    float x = 0.0f, y = 0.0f;   // octave frame
    float scl_oct = 0.0f;       // sigma in octave frame
    float orientation = 0.0f;   // radians
    float response = 0.0f;
};

Pyramid build_pyramid(const FloatImage& base_in, const SiftParams& p) {
    Pyramid pyr;
    pyr.intervals = p.scales_per_octave;
    const int levels = p.scales_per_octave + 3;

    // Octaves stop once the image gets too small for the border margin.
    int max_octaves = 1;
    for (int dim = std::min(base_in.width, base_in.height) / 2; dim >= 4 * p.border;
         dim /= 2) {
        ++max_octaves;
    }
    pyr.octaves = std::min(p.octaves, max_octaves);

    const float base_sigma =
        std::sqrt(std::max(p.sigma0 * p.sigma0 - p.assumed_input_blur * p.assumed_input_blur,
                           0.01f));
    pyr.gauss.reserve(size_t(pyr.octaves) * levels);
    pyr.dog.reserve(size_t(pyr.octaves) * (levels - 1));

    std::vector<float> sig(levels);
    sig[0] = p.sigma0;
    const double k = std::pow(2.0, 1.0 / p.scales_per_octave);
    for (int i = 1; i < levels; ++i) {
        const double prev = p.sigma0 * std::pow(k, i - 1);
        sig[i] = float(prev * std::sqrt(k * k - 1.0));
    }

    for (int o = 0; o < pyr.octaves; ++o) {
        for (int i = 0; i < levels; ++i) {
            if (i == 0) {
                if (o == 0) {
                    pyr.gauss.push_back(detail::gaussian_blur(base_in, base_sigma, true));
                } else {
                    pyr.gauss.push_back(detail::half_sample(pyr.g(o - 1, p.scales_per_octave)));
                }
            } else {
                pyr.gauss.push_back(detail::gaussian_blur(pyr.g(o, i - 1), sig[i], true));
            }
        }
        for (int i = 0; i < levels - 1; ++i) {
            pyr.dog.push_back(detail::subtract(pyr.g(o, i + 1), pyr.g(o, i), true));
        }
    }
    return pyr;
}

bool is_extremum(const Pyramid& pyr, int o, int layer, int x, int y, float prefilter) {
    const float val = pyr.d(o, layer).at(x, y);
    if (std::abs(val) <= prefilter) return false;
    const bool maximum = val > 0.0f;
    for (int dl = -1; dl <= 1; ++dl) {
        const FloatImage& img = pyr.d(o, layer + dl);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dl == 0 && dy == 0 && dx == 0) continue;
                const float n = img.at(x + dx, y + dy);
                if (maximum ? val < n : val > n) return false;
            }
        }
    }
    return true;
}

// Quadratic sub-pixel localization with contrast and edge-response
// filtering; fills the candidate on success.
bool localize(const Pyramid& pyr, const SiftParams& p, int o, int layer, int x, int y,
              OctaveKeypoint& kp) {
    const int s = p.scales_per_octave;
    float ox = 0.0f, oy = 0.0f, os = 0.0f;
    int step = 0;
    for (; step < kMaxInterpSteps; ++step) {
        const FloatImage& prev = pyr.d(o, layer - 1);
        const FloatImage& mid = pyr.d(o, layer);
        const FloatImage& next = pyr.d(o, layer + 1);

        const double dx = 0.5 * (mid.at(x + 1, y) - mid.at(x - 1, y));
        const double dy = 0.5 * (mid.at(x, y + 1) - mid.at(x, y - 1));
        const double ds = 0.5 * (next.at(x, y) - prev.at(x, y));
        const double v2 = 2.0 * mid.at(x, y);
        const double dxx = mid.at(x + 1, y) + mid.at(x - 1, y) - v2;
        const double dyy = mid.at(x, y + 1) + mid.at(x, y - 1) - v2;
        const double dss = next.at(x, y) + prev.at(x, y) - v2;
        const double dxy = 0.25 * (mid.at(x + 1, y + 1) - mid.at(x - 1, y + 1) -
                                   mid.at(x + 1, y - 1) + mid.at(x - 1, y - 1));
        const double dxs =
            0.25 * (next.at(x + 1, y) - next.at(x - 1, y) - prev.at(x + 1, y) + prev.at(x - 1, y));
        const double dys =
            0.25 * (next.at(x, y + 1) - next.at(x, y - 1) - prev.at(x, y + 1) + prev.at(x, y - 1));

        Eigen::Matrix3d hessian;
        hessian << dxx, dxy, dxs, dxy, dyy, dys, dxs, dys, dss;
        const Eigen::Vector3d grad(dx, dy, ds);
        const Eigen::Vector3d offset = hessian.fullPivLu().solve(-grad);
        ox = float(offset.x());
        oy = float(offset.y());
        os = float(offset.z());
        if (std::abs(ox) < 0.5f && std::abs(oy) < 0.5f && std::abs(os) < 0.5f) break;
        if (std::abs(ox) > 1e6f || std::abs(oy) > 1e6f || std::abs(os) > 1e6f) return false;

        x += int(std::lround(ox));
        y += int(std::lround(oy));
        layer += int(std::lround(os));
        const FloatImage& img = pyr.d(o, layer >= 1 && layer <= s ? layer : 1);
        if (layer < 1 || layer > s || x < p.border || x >= img.width - p.border || y < p.border ||
            y >= img.height - p.border) {
            return false;
        }
    }
    if (step >= kMaxInterpSteps) return false;

    const FloatImage& prev = pyr.d(o, layer - 1);
    const FloatImage& mid = pyr.d(o, layer);
    const FloatImage& next = pyr.d(o, layer + 1);
    const double dx = 0.5 * (mid.at(x + 1, y) - mid.at(x - 1, y));
    const double dy = 0.5 * (mid.at(x, y + 1) - mid.at(x, y - 1));
    const double ds = 0.5 * (next.at(x, y) - prev.at(x, y));
    const double contrast = mid.at(x, y) + 0.5 * (dx * ox + dy * oy + ds * os);
    if (std::abs(contrast) * s < p.contrast_threshold) return false;

    const double v2 = 2.0 * mid.at(x, y);
    const double dxx = mid.at(x + 1, y) + mid.at(x - 1, y) - v2;
    const double dyy = mid.at(x, y + 1) + mid.at(x, y - 1) - v2;
    const double dxy = 0.25 * (mid.at(x + 1, y + 1) - mid.at(x - 1, y + 1) -
                               mid.at(x + 1, y - 1) + mid.at(x - 1, y - 1));
    const double tr = dxx + dyy;
    const double det = dxx * dyy - dxy * dxy;
    const double r = p.edge_ratio;
    if (det <= 0.0 || tr * tr * r >= (r + 1.0) * (r + 1.0) * det) return false;

    kp.octave = o;
    kp.layer = layer;
    kp.x = float(x) + ox;
    kp.y = float(y) + oy;
    kp.scl_oct = p.sigma0 * std::pow(2.0f, (layer + os) / float(s));
    kp.response = float(std::abs(contrast));
    return true;
}

// 36-bin gradient-orientation histogram around (cx, cy); returns the
// smoothed histogram's maximum.
float orientation_histogram(const FloatImage& img, int cx, int cy, float scl_oct,
                            float hist[kOriBins]) {
    const float sigma = kOriSigmaFactor * scl_oct;
    const int radius = int(std::lround(3.0f * sigma));
    const float exp_scale = -1.0f / (2.0f * sigma * sigma);

    float raw[kOriBins] = {};
    for (int dy = -radius; dy <= radius; ++dy) {
        const int y = cy + dy;
        if (y < 1 || y >= img.height - 1) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
            const int x = cx + dx;
            if (x < 1 || x >= img.width - 1) continue;
            const float gx = img.at(x + 1, y) - img.at(x - 1, y);
            const float gy = img.at(x, y - 1) - img.at(x, y + 1);
            const float w = std::exp((dx * dx + dy * dy) * exp_scale);
            const float mag = std::sqrt(gx * gx + gy * gy);
            float ori = std::atan2(gy, gx);
            if (ori < 0.0f) ori += float(kTwoPi);
            int bin = int(std::lround(kOriBins / float(kTwoPi) * ori));
            if (bin >= kOriBins) bin -= kOriBins;
            if (bin < 0) bin += kOriBins;
            raw[bin] += w * mag;
        }
    }
    float max_val = 0.0f;
    for (int i = 0; i < kOriBins; ++i) {
        const int m2 = (i - 2 + kOriBins) % kOriBins, m1 = (i - 1 + kOriBins) % kOriBins;
        const int p1 = (i + 1) % kOriBins, p2 = (i + 2) % kOriBins;
        hist[i] = (raw[m2] + raw[p2]) * (1.0f / 16.0f) + (raw[m1] + raw[p1]) * (4.0f / 16.0f) +
                  raw[i] * (6.0f / 16.0f);
        max_val = std::max(max_val, hist[i]);
    }
    return max_val;
}

// 4x4x8 gradient histogram descriptor with trilinear interpolation,
// clamped at 0.2 of the norm and renormalized to unit length.
bool compute_descriptor(const FloatImage& img, float xf, float yf, float angle, float scl_oct,
                        float* dst) {
    constexpr int d = kDescrWidth, n = kDescrBins;
    const int cx = int(std::lround(xf)), cy = int(std::lround(yf));
    const float bins_per_rad = n / float(kTwoPi);
    const float exp_scale = -1.0f / (d * d * 0.5f);
    const float hist_width = kDescrSclFactor * scl_oct;
    int radius = int(std::lround(hist_width * 1.41421356f * (d + 1) * 0.5f));
    radius = std::min(radius,
                      int(std::sqrt(double(img.width) * img.width + double(img.height) * img.height)));
    const float cos_t = std::cos(angle) / hist_width;
    const float sin_t = std::sin(angle) / hist_width;

    float hist[(d + 2) * (d + 2) * (n + 2)] = {};

    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const float c_rot = dx * cos_t - dy * sin_t;
            const float r_rot = dx * sin_t + dy * cos_t;
            const float cbin = c_rot + d / 2 - 0.5f;
            const float rbin = r_rot + d / 2 - 0.5f;
            const int y = cy + dy, x = cx + dx;
            if (rbin <= -1.0f || rbin >= float(d) || cbin <= -1.0f || cbin >= float(d) || y < 1 ||
                y >= img.height - 1 || x < 1 || x >= img.width - 1) {
                continue;
            }
            const float gx = img.at(x + 1, y) - img.at(x - 1, y);
            const float gy = img.at(x, y - 1) - img.at(x, y + 1);
            float ori = std::atan2(gy, gx);
            if (ori < 0.0f) ori += float(kTwoPi);
            const float mag =
                std::sqrt(gx * gx + gy * gy) * std::exp((c_rot * c_rot + r_rot * r_rot) * exp_scale);
            float obin = (ori - angle) * bins_per_rad;

            int r0 = int(std::floor(rbin)), c0 = int(std::floor(cbin)), o0 = int(std::floor(obin));
            const float rf = rbin - r0, cf = cbin - c0, of = obin - o0;
            o0 %= n;
            if (o0 < 0) o0 += n;

            const float v_r1 = mag * rf, v_r0 = mag - v_r1;
            const float v_rc11 = v_r1 * cf, v_rc10 = v_r1 - v_rc11;
            const float v_rc01 = v_r0 * cf, v_rc00 = v_r0 - v_rc01;
            float* h = hist + ((r0 + 1) * (d + 2) + c0 + 1) * (n + 2) + o0;
            h[0] += v_rc00 - v_rc00 * of;
            h[1] += v_rc00 * of;
            h[n + 2] += v_rc01 - v_rc01 * of;
            h[n + 3] += v_rc01 * of;
            h[(d + 2) * (n + 2)] += v_rc10 - v_rc10 * of;
            h[(d + 2) * (n + 2) + 1] += v_rc10 * of;
            h[(d + 3) * (n + 2)] += v_rc11 - v_rc11 * of;
            h[(d + 3) * (n + 2) + 1] += v_rc11 * of;
        }
    }

    // Fold the circular orientation bins and gather the 128 values.
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            float* h = hist + ((i + 1) * (d + 2) + j + 1) * (n + 2);
            h[0] += h[n];
            h[1] += h[n + 1];
            for (int k = 0; k < n; ++k) dst[(i * d + j) * n + k] = h[k];
        }
    }

    const int len = d * d * n;
    double nrm2 = 0.0;
    for (int i = 0; i < len; ++i) nrm2 += double(dst[i]) * dst[i];
    const float thr = float(std::sqrt(nrm2)) * kDescrMagThreshold;
    nrm2 = 0.0;
    for (int i = 0; i < len; ++i) {
        dst[i] = std::min(dst[i], thr);
        nrm2 += double(dst[i]) * dst[i];
    }
    if (nrm2 <= 0.0) return false;
    const float inv = float(1.0 / std::sqrt(nrm2));
    for (int i = 0; i < len; ++i) dst[i] *= inv;
    return true;
}

}  // namespace

SiftExtractor::SiftExtractor(SiftParams params) : params_(params) {
    if (params_.octaves < 1 || params_.scales_per_octave < 1 || params_.max_keypoints < 1) {
        throw std::invalid_argument("SiftExtractor: bad parameters");
    }
}

DescriptorSet SiftExtractor::extract(const ImageGray8& image) const {
    if (image.width < 32 || image.height < 32) {
        throw std::invalid_argument("SiftExtractor: image must be at least 32x32");
    }
    const SiftParams& p = params_;
    const Pyramid pyr = build_pyramid(detail::to_float(image), p);
    const float prefilter = 0.5f * p.contrast_threshold / p.scales_per_octave;

    // Extrema scan is cheap next to the pyramid blurs; keep it serial
    // so candidate order is the scan order.
    std::vector<OctaveKeypoint> candidates;
    for (int o = 0; o < pyr.octaves; ++o) {
        for (int layer = 1; layer <= p.scales_per_octave; ++layer) {
            const FloatImage& img = pyr.d(o, layer);
            for (int y = p.border; y < img.height - p.border; ++y) {
                for (int x = p.border; x < img.width - p.border; ++x) {
                    if (!is_extremum(pyr, o, layer, x, y, prefilter)) continue;
                    OctaveKeypoint kp;
                    if (localize(pyr, p, o, layer, x, y, kp)) candidates.push_back(kp);
                }
            }
        }
    }

    // Orientation assignment, parallel over candidates with per-slot
    // outputs so the merged order stays deterministic.
    std::vector<std::vector<OctaveKeypoint>> oriented(candidates.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < long(candidates.size()); ++idx) {
        const OctaveKeypoint& kp = candidates[idx];
        const FloatImage& img = pyr.g(kp.octave, kp.layer);
        float hist[kOriBins];
        const float max_val = orientation_histogram(img, int(std::lround(kp.x)),
                                                    int(std::lround(kp.y)), kp.scl_oct, hist);
        const float threshold = max_val * kOriPeakRatio;
        for (int b = 0; b < kOriBins; ++b) {
            const int l = (b + kOriBins - 1) % kOriBins;
            const int r = (b + 1) % kOriBins;
            if (!(hist[b] > hist[l] && hist[b] > hist[r] && hist[b] >= threshold)) continue;
            float bin = b + 0.5f * (hist[l] - hist[r]) / (hist[l] - 2.0f * hist[b] + hist[r]);
            if (bin < 0.0f) bin += kOriBins;
            if (bin >= kOriBins) bin -= kOriBins;
            float angle = float(kTwoPi) - float(kTwoPi) / kOriBins * bin;
            if (std::abs(angle - float(kTwoPi)) < 1e-7f) angle = 0.0f;
            OctaveKeypoint out = kp;
            out.orientation = angle;
            oriented[idx].push_back(out);
        }
    }

    std::vector<OctaveKeypoint> keypoints;
    for (const auto& group : oriented) {
        keypoints.insert(keypoints.end(), group.begin(), group.end());
    }

    // Drop exact duplicates (candidates can converge to the same spot).
    std::sort(keypoints.begin(), keypoints.end(), [](const auto& a, const auto& b) {
        if (a.octave != b.octave) return a.octave < b.octave;
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        if (a.scl_oct != b.scl_oct) return a.scl_oct < b.scl_oct;
        if (a.orientation != b.orientation) return a.orientation < b.orientation;
        return a.response > b.response;
    });
    keypoints.erase(std::unique(keypoints.begin(), keypoints.end(),
                                [](const auto& a, const auto& b) {
                                    return a.octave == b.octave && a.x == b.x && a.y == b.y &&
                                           a.scl_oct == b.scl_oct &&
                                           a.orientation == b.orientation;
                                }),
                    keypoints.end());

    // Keep the strongest responses under the cap.
    if (int(keypoints.size()) > p.max_keypoints) {
        std::sort(keypoints.begin(), keypoints.end(), [](const auto& a, const auto& b) {
            if (a.response != b.response) return a.response > b.response;
            if (a.scl_oct != b.scl_oct) return a.scl_oct > b.scl_oct;
            if (a.octave != b.octave) return a.octave < b.octave;
            if (a.y != b.y) return a.y < b.y;
            if (a.x != b.x) return a.x < b.x;
            return a.orientation < b.orientation;
        });
        keypoints.resize(p.max_keypoints);
    }

    // Contract ordering: scale descending, then y, then x.
    std::vector<Keypoint> final_kps(keypoints.size());
    for (size_t i = 0; i < keypoints.size(); ++i) {
        const auto& kp = keypoints[i];
        const float octave_scale = float(1 << kp.octave);
        final_kps[i] = Keypoint{kp.x * octave_scale, kp.y * octave_scale,
                                kp.scl_oct * octave_scale, kp.orientation, kp.response};
    }
    std::vector<int> order(keypoints.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Keypoint &ka = final_kps[a], &kb = final_kps[b];
        if (ka.scale != kb.scale) return ka.scale > kb.scale;
        if (ka.y != kb.y) return ka.y < kb.y;
        if (ka.x != kb.x) return ka.x < kb.x;
        return ka.orientation < kb.orientation;
    });

    DescriptorSet set;
    set.dim = kDescrWidth * kDescrWidth * kDescrBins;
    std::vector<float> desc(size_t(order.size()) * set.dim);
    std::vector<uint8_t> ok(order.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < long(order.size()); ++i) {
        const OctaveKeypoint& kp = keypoints[order[i]];
        ok[i] = compute_descriptor(pyr.g(kp.octave, kp.layer), kp.x, kp.y, kp.orientation,
                                   kp.scl_oct, desc.data() + size_t(i) * set.dim)
                    ? 1
                    : 0;
    }

    for (size_t i = 0; i < order.size(); ++i) {
        if (!ok[i]) continue;  // degenerate flat patch
        set.keypoints.push_back(final_kps[order[i]]);
        set.data.insert(set.data.end(), desc.begin() + i * set.dim,
                        desc.begin() + (i + 1) * set.dim);
    }
    set.count = int(set.keypoints.size());
    return set;
}

}  // namespace viewplan
