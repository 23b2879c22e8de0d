#include "viewplan/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "viewplan/png_io.hpp"

namespace viewplan {

namespace fs = std::filesystem;

std::string view_basename(int id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", id);
    return buf;
}

void init_dataset(const std::string& root, const RunConfig& config) {
    fs::create_directories(fs::path(root) / "rgb");
    fs::create_directories(fs::path(root) / "depth");
    config.save((fs::path(root) / "manifest.json").string());
}

void write_pose_file(const std::string& root, const std::vector<PoseRecord>& poses) {
    const std::string path = (fs::path(root) / "poses.jsonl").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dataset: cannot write " + path);
    for (const auto& r : poses) {
        nlohmann::json j{{"id", r.id},
                         {"radius_m", r.pose.radius},
                         {"azimuth_rad", r.pose.azimuth},
                         {"elevation_rad", r.pose.elevation}};
        out << j.dump() << "\n";
    }
}

void save_view(const std::string& root, int id, const RenderOutput& view) {
    const std::string base = view_basename(id);
    write_png_rgb8((fs::path(root) / "rgb" / (base + ".png")).string(), view.rgb);
    write_png_depth_mm((fs::path(root) / "depth" / (base + ".png")).string(), view.depth);
}

Dataset open_dataset(const std::string& root) {
    Dataset d;
    d.root = root;
    d.config = RunConfig::load((fs::path(root) / "manifest.json").string());

    const std::string path = (fs::path(root) / "poses.jsonl").string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        PoseRecord r;
        r.id = j.at("id").get<int>();
        r.pose = SphericalPose(j.at("radius_m").get<double>(), j.at("azimuth_rad").get<double>(),
                               j.at("elevation_rad").get<double>());
        d.poses.push_back(r);
    }
    if (d.poses.empty()) throw std::runtime_error("dataset: no poses in " + path);
    return d;
}

ImageU8 load_rgb(const Dataset& dataset, int id) {
    return read_png_rgb8((fs::path(dataset.root) / "rgb" / (view_basename(id) + ".png")).string());
}

ImageF32 load_depth(const Dataset& dataset, int id) {
    return read_png_depth_mm(
        (fs::path(dataset.root) / "depth" / (view_basename(id) + ".png")).string());
}

void write_episode_log(const std::string& path, const std::vector<EpisodeLogEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("episode log: cannot write " + path);
    for (const auto& e : entries) {
        nlohmann::json j{{"step", e.step},
                         {"radius_m", e.pose.radius},
                         {"azimuth_rad", e.pose.azimuth},
                         {"elevation_rad", e.pose.elevation},
                         {"reward", e.reward},
                         {"accepted", e.accepted},
                         {"region_id", e.region},
                         {"cumulative_azimuth_rad", e.cumulative_azimuth}};
        out << j.dump() << "\n";
    }
}

std::vector<EpisodeLogEntry> read_episode_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("episode log: cannot open " + path);
    std::vector<EpisodeLogEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        EpisodeLogEntry e;
        e.step = j.at("step").get<int>();
        e.pose = SphericalPose(j.at("radius_m").get<double>(), j.at("azimuth_rad").get<double>(),
                               j.at("elevation_rad").get<double>());
        e.reward = j.at("reward").get<double>();
        e.accepted = j.at("accepted").get<bool>();
        e.region = j.at("region_id").get<int>();
        e.cumulative_azimuth = j.at("cumulative_azimuth_rad").get<double>();
        entries.push_back(e);
    }
    return entries;
}

void write_selected_ids(const std::string& path, const std::vector<int>& ids) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("selection: cannot write " + path);
    for (const int id : ids) out << id << "\n";
}

std::vector<int> read_selected_ids(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("selection: cannot open " + path);
    std::vector<int> ids;
    int id;
    while (in >> id) ids.push_back(id);
    return ids;
}

}  // namespace viewplan
