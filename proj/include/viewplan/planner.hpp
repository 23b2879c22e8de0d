#pragma once

#include <array>
#include <memory>
#include <vector>

#include "viewplan/bov.hpp"
#include "viewplan/features.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/render.hpp"
#include "viewplan/scene.hpp"

namespace viewplan {

struct ScanPlan {
    std::vector<SphericalPose> poses;
    double end_overlap = 0.0;
    double side_overlap = 0.0;
    double radius = 0.0;
};

/// Hemisphere coverage plan with constant end/side overlap under flat
/// plane and small angle approximations: footprint ~ 2 R tan(FOV/2),
/// angular steps footprint*(1-overlap)/R, azimuth counts inflated by
/// 1/cos(elevation) per ring, serpentine ring order, single zenith
/// pose. Throws when the request explodes past 10,000 views.
ScanPlan plan_hemisphere(double radius, double end_overlap, double side_overlap,
                         const CameraIntrinsics& intrinsics);

/// Action components in [-1, 1]; rescaled by the environment to radius
/// in [radius_min, radius_max], a strictly positive azimuth advance,
/// and elevation in [0, elevation_max].
struct Action {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    Action() = default;
    Action(double a0, double a1, double a2);
};

struct EnvConfig {
    CameraIntrinsics intrinsics;
    BovConfig bov;
    int obs_size = 64;
    int tau = 5;  // history length
    double radius_min = 1.6;
    double radius_max = 2.4;
    double elevation_max = 0.5 * kPi;
    double azimuth_step_max = kPi / 3.0;
    double azimuth_step_min = 0.01;
    double bootstrap_reward = 1.0;  // clamp for the +inf sentinel
    SphericalPose start_pose{2.0, 0.0, 0.6};
    bool random_start = false;

    void validate() const;
};

/// Observation/pose histories over the last tau frames, front-padded
/// with the initial frame. Pose components are normalized to [0, 1] by
/// the configured ranges.
struct EnvState {
    std::vector<ImageGray8> obs_history;
    std::vector<std::array<double, 3>> pose_history;
};

struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
    SphericalPose pose;
    int region = 0;
    bool accepted = false;  // utility > 0 against the pre-update vocabulary
    double utility = 0.0;
    double cumulative_azimuth = 0.0;
    RenderOutput view;
};

/// POMDP environment: deterministic transitions on the hemisphere, the
/// vocabulary-change reward, termination after one full pass (2*pi of
/// cumulative azimuth advance).
class Environment {
public:
    Environment(const Scene& scene, const FeatureExtractor& extractor, EnvConfig config);

    EnvState reset(uint64_t seed);
    StepResult step(const Action& action);

    /// Prospective reward of an action scored against a frozen
    /// snapshot; does not mutate the environment.
    double score_action(const Action& action) const;

    SphericalPose rescale_action(const Action& action) const;
    const SphericalPose& pose() const { return pose_; }
    const BagOfViews& bov() const { return *bov_; }
    const EnvConfig& config() const { return config_; }
    const RenderOutput& last_view() const { return last_view_; }
    double cumulative_azimuth() const { return cumulative_azimuth_; }

private:
    EnvState make_state() const;
    std::array<double, 3> normalize_pose(const SphericalPose& p) const;
    double reward_for(const Vocabulary& after, const Vocabulary& before) const;

    const Scene* scene_;
    const FeatureExtractor* extractor_;
    EnvConfig config_;
    Raycaster caster_;
    std::unique_ptr<BagOfViews> bov_;
    SphericalPose pose_;
    double cumulative_azimuth_ = 0.0;
    RenderOutput last_view_;
    std::vector<ImageGray8> obs_history_;
    std::vector<std::array<double, 3>> pose_history_;
};

struct NbvConfig {
    int candidates_per_step = 16;
    int budget = 64;  // max environment steps
    uint64_t seed = 0;
};

struct EpisodeStep {
    int step = 0;
    SphericalPose pose;
    double reward = 0.0;
    bool accepted = false;
    int region = 0;
    double cumulative_azimuth = 0.0;
};

struct EpisodeRecord {
    std::vector<EpisodeStep> steps;

    double total_reward() const;
};

struct CapturedView {
    int id = 0;
    SphericalPose pose;
    RenderOutput view;
};

struct NbvResult {
    EpisodeRecord episode;
    std::vector<CapturedView> captures;  // reset view first
};

/// Greedy candidate-scoring planner: per step, candidates_per_step
/// actions from a seeded Halton sequence over the action box are scored
/// by prospective reward against the frozen vocabulary snapshot and the
/// argmax is committed. candidates_per_step = 1 degenerates to a seeded
/// random walk with forward azimuth drift.
NbvResult greedy_nbv(Environment& env, const NbvConfig& config);

/// Halton radical inverse (bases 2, 3, 5 for the three components).
double halton(uint64_t index, int base);

}  // namespace viewplan
