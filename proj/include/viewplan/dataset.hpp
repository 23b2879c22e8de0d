#pragma once

#include <string>
#include <vector>

#include "viewplan/config.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/render.hpp"

namespace viewplan {

// On-disk dataset layout:
//   root/manifest.json   scene spec, intrinsics, seeds
//   root/poses.jsonl     {"id", "radius_m", "azimuth_rad", "elevation_rad"} per line
//   root/rgb/0000.png    8-bit RGB
//   root/depth/0000.png  16-bit grayscale, millimeters, 0 = invalid

struct PoseRecord {
    int id = 0;
    SphericalPose pose;
};

struct Dataset {
    std::string root;
    RunConfig config;  // from the manifest
    std::vector<PoseRecord> poses;
};

std::string view_basename(int id);  // zero-padded 4 digits

void init_dataset(const std::string& root, const RunConfig& config);
void write_pose_file(const std::string& root, const std::vector<PoseRecord>& poses);
void save_view(const std::string& root, int id, const RenderOutput& view);

Dataset open_dataset(const std::string& root);
ImageU8 load_rgb(const Dataset& dataset, int id);
ImageF32 load_depth(const Dataset& dataset, int id);

// Episode logs: one JSON object per line, replayable by `eval`.
struct EpisodeLogEntry {
    int step = 0;
    SphericalPose pose;
    double reward = 0.0;
    bool accepted = false;
    int region = 0;
    double cumulative_azimuth = 0.0;
};

void write_episode_log(const std::string& path, const std::vector<EpisodeLogEntry>& entries);
std::vector<EpisodeLogEntry> read_episode_log(const std::string& path);

void write_selected_ids(const std::string& path, const std::vector<int>& ids);
std::vector<int> read_selected_ids(const std::string& path);

}  // namespace viewplan
