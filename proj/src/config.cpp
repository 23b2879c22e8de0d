#include "viewplan/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace viewplan {

void RunConfig::validate() const {
    intrinsics.validate();
    bov.validate();
    env_config().validate();
    if (scan_radius <= 0.0) throw std::invalid_argument("RunConfig: scan_radius must be > 0");
    if (end_overlap < 0.0 || end_overlap > 0.95 || side_overlap < 0.0 || side_overlap > 0.95) {
        throw std::invalid_argument("RunConfig: overlaps must lie in [0, 0.95]");
    }
    if (keypoint_cap < 1) throw std::invalid_argument("RunConfig: keypoint_cap must be >= 1");
    if (candidates_per_step < 1) {
        throw std::invalid_argument("RunConfig: candidates_per_step must be >= 1");
    }
    if (budget < 1) throw std::invalid_argument("RunConfig: budget must be >= 1");
    if (voxels_per_axis < 8) throw std::invalid_argument("RunConfig: voxels_per_axis must be >= 8");
    if (!(truncation_voxels > 0.0)) {
        throw std::invalid_argument("RunConfig: truncation_voxels must be > 0");
    }
    if (coverage_epsilon_m < 0.0) {
        throw std::invalid_argument("RunConfig: coverage_epsilon_m must be >= 0");
    }
}

EnvConfig RunConfig::env_config() const {
    EnvConfig env;
    env.intrinsics = intrinsics;
    env.bov = bov;
    env.obs_size = obs_size;
    env.tau = tau;
    env.radius_min = radius_min;
    env.radius_max = radius_max;
    env.elevation_max = elevation_max;
    env.azimuth_step_max = azimuth_step_max;
    env.azimuth_step_min = azimuth_step_min;
    env.bootstrap_reward = bootstrap_reward;
    env.start_pose = SphericalPose(start_radius, start_azimuth, start_elevation);
    env.random_start = random_start;
    return env;
}

std::string RunConfig::to_json_string() const {
    nlohmann::json j;
    j["scene"] = {{"generator", scene.generator}, {"size", scene.size}, {"seed", scene_seed}};
    j["intrinsics"] = {{"width", intrinsics.width},
                       {"height", intrinsics.height},
                       {"focal_length_mm", intrinsics.focal_length_mm},
                       {"sensor_width_mm", intrinsics.sensor_width_mm},
                       {"depth_min_m", intrinsics.depth_min_m},
                       {"depth_max_m", intrinsics.depth_max_m}};
    j["scan"] = {{"radius_m", scan_radius},
                 {"end_overlap", end_overlap},
                 {"side_overlap", side_overlap}};
    j["bov"] = {{"regions", bov.regions},
                {"words_per_region", bov.words_per_region},
                {"distance_coefficient", bov.distance_coefficient},
                {"kmeans_seed", bov.kmeans_seed},
                {"kmeans_max_iters", bov.kmeans_max_iters},
                {"pool_cap", bov.pool_cap}};
    j["features"] = {{"keypoint_cap", keypoint_cap}};
    j["planner"] = {{"obs_size", obs_size},
                    {"tau", tau},
                    {"radius_min", radius_min},
                    {"radius_max", radius_max},
                    {"elevation_max", elevation_max},
                    {"azimuth_step_max", azimuth_step_max},
                    {"azimuth_step_min", azimuth_step_min},
                    {"bootstrap_reward", bootstrap_reward},
                    {"start_radius", start_radius},
                    {"start_azimuth", start_azimuth},
                    {"start_elevation", start_elevation},
                    {"random_start", random_start},
                    {"candidates_per_step", candidates_per_step},
                    {"budget", budget},
                    {"seed", planner_seed}};
    j["recon"] = {{"voxels_per_axis", voxels_per_axis},
                  {"truncation_voxels", truncation_voxels},
                  {"coverage_epsilon_m", coverage_epsilon_m}};
    return j.dump(2);
}

RunConfig RunConfig::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("RunConfig: JSON parse error: ") + e.what());
    }
    RunConfig c;
    const nlohmann::json empty = nlohmann::json::object();
    const auto& js = j.value("scene", empty);
    c.scene.generator = js.value("generator", c.scene.generator);
    c.scene.size = js.value("size", c.scene.size);
    c.scene_seed = js.value("seed", c.scene_seed);

    const auto& ji = j.value("intrinsics", empty);
    c.intrinsics.width = ji.value("width", c.intrinsics.width);
    c.intrinsics.height = ji.value("height", c.intrinsics.height);
    c.intrinsics.focal_length_mm = ji.value("focal_length_mm", c.intrinsics.focal_length_mm);
    c.intrinsics.sensor_width_mm = ji.value("sensor_width_mm", c.intrinsics.sensor_width_mm);
    c.intrinsics.depth_min_m = ji.value("depth_min_m", c.intrinsics.depth_min_m);
    c.intrinsics.depth_max_m = ji.value("depth_max_m", c.intrinsics.depth_max_m);

    const auto& jsc = j.value("scan", empty);
    c.scan_radius = jsc.value("radius_m", c.scan_radius);
    c.end_overlap = jsc.value("end_overlap", c.end_overlap);
    c.side_overlap = jsc.value("side_overlap", c.side_overlap);

    const auto& jb = j.value("bov", empty);
    c.bov.regions = jb.value("regions", c.bov.regions);
    c.bov.words_per_region = jb.value("words_per_region", c.bov.words_per_region);
    c.bov.distance_coefficient = jb.value("distance_coefficient", c.bov.distance_coefficient);
    c.bov.kmeans_seed = jb.value("kmeans_seed", c.bov.kmeans_seed);
    c.bov.kmeans_max_iters = jb.value("kmeans_max_iters", c.bov.kmeans_max_iters);
    c.bov.pool_cap = jb.value("pool_cap", c.bov.pool_cap);

    const auto& jf = j.value("features", empty);
    c.keypoint_cap = jf.value("keypoint_cap", c.keypoint_cap);

    const auto& jp = j.value("planner", empty);
    c.obs_size = jp.value("obs_size", c.obs_size);
    c.tau = jp.value("tau", c.tau);
    c.radius_min = jp.value("radius_min", c.radius_min);
    c.radius_max = jp.value("radius_max", c.radius_max);
    c.elevation_max = jp.value("elevation_max", c.elevation_max);
    c.azimuth_step_max = jp.value("azimuth_step_max", c.azimuth_step_max);
    c.azimuth_step_min = jp.value("azimuth_step_min", c.azimuth_step_min);
    c.bootstrap_reward = jp.value("bootstrap_reward", c.bootstrap_reward);
    c.start_radius = jp.value("start_radius", c.start_radius);
    c.start_azimuth = jp.value("start_azimuth", c.start_azimuth);
    c.start_elevation = jp.value("start_elevation", c.start_elevation);
    c.random_start = jp.value("random_start", c.random_start);
    c.candidates_per_step = jp.value("candidates_per_step", c.candidates_per_step);
    c.budget = jp.value("budget", c.budget);
    c.planner_seed = jp.value("seed", c.planner_seed);

    const auto& jr = j.value("recon", empty);
    c.voxels_per_axis = jr.value("voxels_per_axis", c.voxels_per_axis);
    c.truncation_voxels = jr.value("truncation_voxels", c.truncation_voxels);
    c.coverage_epsilon_m = jr.value("coverage_epsilon_m", c.coverage_epsilon_m);

    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RunConfig: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("RunConfig: cannot write " + path);
    out << to_json_string() << "\n";
}

}  // namespace viewplan
