#include "viewplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace viewplan {

ScanPlan plan_hemisphere(double radius, double end_overlap, double side_overlap,
                         const CameraIntrinsics& intrinsics) {
    intrinsics.validate();
    if (!(radius > 0.0) || end_overlap < 0.0 || end_overlap > 0.95 || side_overlap < 0.0 ||
        side_overlap > 0.95) {
        throw std::invalid_argument("plan_hemisphere: radius > 0 and overlaps in [0, 0.95]");
    }
    const double step_azimuth =
        2.0 * std::tan(0.5 * intrinsics.fov_horizontal()) * (1.0 - end_overlap);
    const double step_elevation =
        2.0 * std::tan(0.5 * intrinsics.fov_vertical()) * (1.0 - side_overlap);

    ScanPlan plan;
    plan.radius = radius;
    plan.end_overlap = end_overlap;
    plan.side_overlap = side_overlap;

    int ring_index = 0;
    for (double elevation = 0.0; elevation < 0.5 * kPi - 1e-9; elevation += step_elevation) {
        const double circumference_scale = std::cos(elevation);
        int count = int(std::ceil(kTwoPi * circumference_scale / step_azimuth));
        count = std::max(count, 1);
        const double step = kTwoPi / count;
        for (int i = 0; i < count; ++i) {
            // Serpentine azimuth order ring to ring.
            const int j = (ring_index % 2 == 0) ? i : count - 1 - i;
            plan.poses.emplace_back(radius, j * step, elevation);
        }
        if (plan.poses.size() > 10000) {
            throw std::invalid_argument("plan_hemisphere: overlap configuration explodes past 10000 views");
        }
        ++ring_index;
    }
    plan.poses.emplace_back(radius, 0.0, 0.5 * kPi);  // zenith collapses to one pose
    return plan;
}

Action::Action(double a0, double a1, double a2)
    : v{std::clamp(a0, -1.0, 1.0), std::clamp(a1, -1.0, 1.0), std::clamp(a2, -1.0, 1.0)} {}

void EnvConfig::validate() const {
    intrinsics.validate();
    bov.validate();
    if (obs_size < 8) throw std::invalid_argument("EnvConfig: obs_size must be >= 8");
    if (tau < 1) throw std::invalid_argument("EnvConfig: tau must be >= 1");
    if (!(radius_min > 0.0) || !(radius_max >= radius_min)) {
        throw std::invalid_argument("EnvConfig: need 0 < radius_min <= radius_max");
    }
    if (!(elevation_max >= 0.0) || elevation_max > 0.5 * kPi + 1e-12) {
        throw std::invalid_argument("EnvConfig: elevation_max in [0, pi/2]");
    }
    if (!(azimuth_step_min > 0.0) || !(azimuth_step_max >= azimuth_step_min)) {
        throw std::invalid_argument("EnvConfig: need 0 < azimuth_step_min <= azimuth_step_max");
    }
}

Environment::Environment(const Scene& scene, const FeatureExtractor& extractor, EnvConfig config)
    : scene_(&scene),
      extractor_(&extractor),
      config_(std::move(config)),
      caster_(scene),
      pose_(config_.start_pose) {
    config_.validate();
    bov_ = std::make_unique<BagOfViews>(config_.bov);
}

std::array<double, 3> Environment::normalize_pose(const SphericalPose& p) const {
    const double radius_span = config_.radius_max - config_.radius_min;
    const double r = radius_span > 0.0
                         ? std::clamp((p.radius - config_.radius_min) / radius_span, 0.0, 1.0)
                         : 0.0;
    const double el = config_.elevation_max > 0.0
                          ? std::clamp(p.elevation / config_.elevation_max, 0.0, 1.0)
                          : 0.0;
    return {r, p.azimuth / kTwoPi, el};
}

EnvState Environment::make_state() const {
    return EnvState{obs_history_, pose_history_};
}

EnvState Environment::reset(uint64_t seed) {
    bov_ = std::make_unique<BagOfViews>(config_.bov);
    cumulative_azimuth_ = 0.0;

    if (config_.random_start) {
        std::mt19937_64 gen(seed);
        auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53; };
        pose_ = SphericalPose(
            config_.radius_min + uniform() * (config_.radius_max - config_.radius_min),
            uniform() * kTwoPi, uniform() * config_.elevation_max);
    } else {
        pose_ = config_.start_pose;
    }

    last_view_ = render(caster_, pose_, config_.intrinsics);
    const ImageGray8 obs = downsample_gray(to_grayscale(last_view_.rgb), config_.obs_size);

    obs_history_.assign(config_.tau, obs);  // front-padded with the initial frame
    pose_history_.assign(config_.tau, normalize_pose(pose_));
    return make_state();
}

SphericalPose Environment::rescale_action(const Action& action) const {
    const double radius =
        config_.radius_min + 0.5 * (action.v[0] + 1.0) * (config_.radius_max - config_.radius_min);
    const double advance = std::clamp(0.5 * (action.v[1] + 1.0) * config_.azimuth_step_max,
                                      config_.azimuth_step_min, config_.azimuth_step_max);
    const double elevation = 0.5 * (action.v[2] + 1.0) * config_.elevation_max;
    return SphericalPose(radius, pose_.azimuth + advance, elevation);
}

double Environment::reward_for(const Vocabulary& after, const Vocabulary& before) const {
    const double change = vocabulary_change(after, before, config_.bov.distance_coefficient);
    if (std::isinf(change)) return config_.bootstrap_reward;
    return change - 1.0;
}

StepResult Environment::step(const Action& action) {
    const SphericalPose next = rescale_action(action);
    const double advance = next.azimuth >= pose_.azimuth
                               ? next.azimuth - pose_.azimuth
                               : next.azimuth + kTwoPi - pose_.azimuth;
    pose_ = next;
    cumulative_azimuth_ += advance;

    last_view_ = render(caster_, pose_, config_.intrinsics);
    const ImageGray8 gray = to_grayscale(last_view_.rgb);
    const DescriptorSet descriptors = extractor_->extract(gray);

    StepResult result;
    result.region = bov_->region_of(pose_);
    const Vocabulary before = bov_->vocabulary(result.region);
    result.utility = bov_->utility(result.region, descriptors);
    bov_->update(result.region, descriptors);
    result.reward = reward_for(bov_->vocabulary(result.region), before);
    result.accepted = result.utility > 0.0;

    obs_history_.erase(obs_history_.begin());
    obs_history_.push_back(downsample_gray(gray, config_.obs_size));
    pose_history_.erase(pose_history_.begin());
    pose_history_.push_back(normalize_pose(pose_));

    result.state = make_state();
    result.pose = pose_;
    result.cumulative_azimuth = cumulative_azimuth_;
    result.done = cumulative_azimuth_ >= kTwoPi;
    result.view = last_view_;
    return result;
}

double Environment::score_action(const Action& action) const {
    const SphericalPose candidate = rescale_action(action);
    const RenderOutput view = render(caster_, candidate, config_.intrinsics);
    const DescriptorSet descriptors = extractor_->extract(to_grayscale(view.rgb));
    const int region = bov_->region_of(candidate);
    const Vocabulary& before = bov_->vocabulary(region);
    Vocabulary snapshot = before;
    update_vocabulary(snapshot, descriptors, config_.bov);
    return reward_for(snapshot, before);
}

double EpisodeRecord::total_reward() const {
    double sum = 0.0;
    for (const auto& s : steps) sum += s.reward;
    return sum;
}

double halton(uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * double(index % uint64_t(base));
        index /= uint64_t(base);
    }
    return r;
}

NbvResult greedy_nbv(Environment& env, const NbvConfig& config) {
    if (config.candidates_per_step < 1 || config.budget < 1) {
        throw std::invalid_argument("greedy_nbv: candidates and budget must be >= 1");
    }
    NbvResult result;
    env.reset(config.seed);
    result.captures.push_back({0, env.pose(), env.last_view()});

    // Seed offsets the deterministic Halton stream.
    const uint64_t offset = 1 + (config.seed % 8191) * 64;
    uint64_t next_index = offset;

    for (int step = 0; step < config.budget; ++step) {
        Action best_action;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < config.candidates_per_step; ++c) {
            const uint64_t i = next_index++;
            const Action action(2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0,
                                2.0 * halton(i, 5) - 1.0);
            const double score =
                config.candidates_per_step == 1 ? 0.0 : env.score_action(action);
            if (score > best_score) {
                best_score = score;
                best_action = action;
            }
        }
        const StepResult sr = env.step(best_action);
        result.episode.steps.push_back(EpisodeStep{step, sr.pose, sr.reward, sr.accepted,
                                                   sr.region, sr.cumulative_azimuth});
        result.captures.push_back({step + 1, sr.pose, sr.view});
        if (sr.done) break;
    }
    return result;
}

}  // namespace viewplan
