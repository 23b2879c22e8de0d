#pragma once

#include <string>

#include "viewplan/bov.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/scene.hpp"

namespace viewplan {

/// Everything a run needs, with full defaulting from a JSON config
/// file. Module preconditions are checked at load.
struct RunConfig {
    SceneSpec scene;
    uint64_t scene_seed = 1;

    CameraIntrinsics intrinsics;

    // Hemisphere scan
    double scan_radius = 2.0;
    double end_overlap = 0.6;
    double side_overlap = 0.6;

    BovConfig bov;
    int keypoint_cap = 1000;

    // Environment / NBV
    int obs_size = 64;
    int tau = 5;
    double radius_min = 1.6;
    double radius_max = 2.4;
    double elevation_max = 0.5 * kPi;
    double azimuth_step_max = kPi / 3.0;
    double azimuth_step_min = 0.01;
    double bootstrap_reward = 1.0;
    double start_radius = 2.0;
    double start_azimuth = 0.0;
    double start_elevation = 0.6;
    bool random_start = false;
    int candidates_per_step = 16;
    int budget = 64;
    uint64_t planner_seed = 0;

    // Reconstruction / metrics
    int voxels_per_axis = 256;
    double truncation_voxels = 5.0;
    double coverage_epsilon_m = 0.0;  // 0 = 2 * voxel_size

    void validate() const;
    EnvConfig env_config() const;

    std::string to_json_string() const;
    static RunConfig from_json_string(const std::string& text);
    static RunConfig load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace viewplan
