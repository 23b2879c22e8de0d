#include "viewplan/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "viewplan/sift.hpp"
#include "viewplan/tsdf.hpp"

namespace viewplan {

namespace fs = std::filesystem;

int cmd_scan(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    const Scene scene = make_procedural_scene(config.scene, config.scene_seed);
    const ScanPlan plan =
        plan_hemisphere(config.scan_radius, config.end_overlap, config.side_overlap,
                        config.intrinsics);

    init_dataset(out_dir, config);
    const Raycaster caster(scene);
    std::vector<PoseRecord> poses;
    poses.reserve(plan.poses.size());
    for (size_t i = 0; i < plan.poses.size(); ++i) {
        const RenderOutput view = render(caster, plan.poses[i], config.intrinsics);
        save_view(out_dir, int(i), view);
        poses.push_back({int(i), plan.poses[i]});
    }
    write_pose_file(out_dir, poses);
    return int(plan.poses.size());
}

double default_epsilon(const RunConfig& config) {
    if (config.coverage_epsilon_m > 0.0) return config.coverage_epsilon_m;
    const Scene scene = make_procedural_scene(config.scene, config.scene_seed);
    const double side = 2.2 * scene.bounding_radius;
    return 2.0 * side / config.voxels_per_axis;
}

ReconResult reconstruct_views(const Dataset& dataset, const RunConfig& config,
                              const std::vector<int>& ids) {
    const Scene scene = make_procedural_scene(config.scene, config.scene_seed);
    TsdfVolume volume = TsdfVolume::for_scene(scene.bounding_radius, config.voxels_per_axis,
                                              config.truncation_voxels);

    std::vector<int> use = ids;
    if (use.empty()) {
        for (const auto& r : dataset.poses) use.push_back(r.id);
    }
    for (const int id : use) {
        const auto record = std::find_if(dataset.poses.begin(), dataset.poses.end(),
                                         [&](const PoseRecord& r) { return r.id == id; });
        if (record == dataset.poses.end()) {
            throw std::runtime_error("reconstruct: unknown view id " + std::to_string(id));
        }
        const ImageU8 rgb = load_rgb(dataset, id);
        const ImageF32 depth = load_depth(dataset, id);
        volume.integrate(rgb, depth, dataset.config.intrinsics, look_at_transform(record->pose));
    }
    ReconResult result;
    result.mesh = volume.extract_mesh();
    result.cloud = volume.extract_pointcloud();
    result.view_count = int(use.size());
    return result;
}

namespace {

MetricsReport compare_clouds(const PointCloud& recon, const PointCloud& baseline, double epsilon,
                             int view_count, int baseline_view_count) {
    MetricsReport report;
    report.hausdorff_m = hausdorff(recon, baseline);
    report.chamfer_m = chamfer(recon, baseline);
    report.coverage = coverage(recon, baseline, epsilon);
    report.epsilon_m = epsilon;
    report.view_count = view_count;
    report.baseline_view_count = baseline_view_count;
    return report;
}

}  // namespace

RefineOutputs cmd_refine(const Dataset& dataset, const RunConfig& config,
                         const std::string& out_dir, const std::string& cache_dir) {
    config.validate();
    fs::create_directories(out_dir);

    SiftParams sift_params;
    sift_params.max_keypoints = config.keypoint_cap;
    const SiftExtractor extractor(sift_params);

    std::vector<RefineView> views;
    views.reserve(dataset.poses.size());
    for (const auto& r : dataset.poses) views.push_back({r.id, r.pose});

    const auto descriptors_for = [&](const RefineView& view) {
        if (!cache_dir.empty()) {
            const std::string path =
                (fs::path(cache_dir) / (view_basename(view.id) + ".desc")).string();
            if (auto cached = read_descriptor_cache(path)) return *cached;
            const DescriptorSet set = extractor.extract(to_grayscale(load_rgb(dataset, view.id)));
            fs::create_directories(cache_dir);
            write_descriptor_cache(path, set);
            return set;
        }
        return extractor.extract(to_grayscale(load_rgb(dataset, view.id)));
    };

    const RefineResult refined = refine_dataset(views, descriptors_for, config.bov);

    write_selected_ids((fs::path(out_dir) / "selected_ids.txt").string(), refined.accepted_ids);
    {
        std::ofstream bov_out((fs::path(out_dir) / "bov.json").string());
        bov_out << refined.bov.to_json_string() << "\n";
    }

    const ReconResult refined_recon = reconstruct_views(dataset, config, refined.accepted_ids);
    const ReconResult baseline_recon = reconstruct_views(dataset, config, {});
    write_ply((fs::path(out_dir) / "refined_mesh.ply").string(), refined_recon.mesh);
    write_ply((fs::path(out_dir) / "refined_cloud.ply").string(), refined_recon.cloud);
    write_ply((fs::path(out_dir) / "baseline_mesh.ply").string(), baseline_recon.mesh);
    write_ply((fs::path(out_dir) / "baseline_cloud.ply").string(), baseline_recon.cloud);

    RefineOutputs out;
    out.selected_ids = refined.accepted_ids;
    out.report = compare_clouds(refined_recon.cloud, baseline_recon.cloud,
                                default_epsilon(config), refined_recon.view_count,
                                baseline_recon.view_count);
    write_report((fs::path(out_dir) / "report.json").string(), out.report);
    return out;
}

NbvOutputs cmd_plan_nbv(const RunConfig& config, const std::string& out_dir,
                        const std::string& baseline_cloud_path) {
    config.validate();
    fs::create_directories(out_dir);

    const Scene scene = make_procedural_scene(config.scene, config.scene_seed);
    SiftParams sift_params;
    sift_params.max_keypoints = config.keypoint_cap;
    const SiftExtractor extractor(sift_params);
    Environment env(scene, extractor, config.env_config());

    NbvConfig nbv_config;
    nbv_config.candidates_per_step = config.candidates_per_step;
    nbv_config.budget = config.budget;
    nbv_config.seed = config.planner_seed;
    const NbvResult nbv = greedy_nbv(env, nbv_config);

    // Captured dataset (reset view included).
    const std::string capture_dir = (fs::path(out_dir) / "captures").string();
    init_dataset(capture_dir, config);
    std::vector<PoseRecord> poses;
    for (const auto& c : nbv.captures) {
        save_view(capture_dir, c.id, c.view);
        poses.push_back({c.id, c.pose});
    }
    write_pose_file(capture_dir, poses);

    std::vector<EpisodeLogEntry> log;
    for (const auto& s : nbv.episode.steps) {
        log.push_back({s.step, s.pose, s.reward, s.accepted, s.region, s.cumulative_azimuth});
    }
    write_episode_log((fs::path(out_dir) / "episode.jsonl").string(), log);

    const Dataset captures = open_dataset(capture_dir);
    const ReconResult recon = reconstruct_views(captures, config, {});
    write_ply((fs::path(out_dir) / "nbv_mesh.ply").string(), recon.mesh);
    write_ply((fs::path(out_dir) / "nbv_cloud.ply").string(), recon.cloud);

    PointCloud baseline_cloud;
    int baseline_views = 0;
    if (!baseline_cloud_path.empty()) {
        baseline_cloud = read_ply_points(baseline_cloud_path);
    } else {
        const std::string baseline_dir = (fs::path(out_dir) / "baseline").string();
        baseline_views = cmd_scan(config, baseline_dir);
        const Dataset baseline = open_dataset(baseline_dir);
        const ReconResult baseline_recon = reconstruct_views(baseline, config, {});
        write_ply((fs::path(baseline_dir) / "baseline_cloud.ply").string(), baseline_recon.cloud);
        baseline_cloud = baseline_recon.cloud;
    }

    NbvOutputs out;
    out.episode = nbv.episode;
    out.captured_views = int(nbv.captures.size());
    out.report = compare_clouds(recon.cloud, baseline_cloud, default_epsilon(config),
                                out.captured_views, baseline_views);
    write_report((fs::path(out_dir) / "report.json").string(), out.report);
    return out;
}

MetricsReport cmd_eval(const std::string& recon_ply, const std::string& baseline_ply,
                       double epsilon_m) {
    const PointCloud recon = read_ply_points(recon_ply);
    const PointCloud baseline = read_ply_points(baseline_ply);
    return compare_clouds(recon, baseline, epsilon_m, 0, 0);
}

std::vector<SweepRow> cmd_sweep(const Dataset& dataset, const RunConfig& config,
                                const std::vector<int>& region_counts,
                                const std::vector<int>& word_counts, const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);

    SiftParams sift_params;
    sift_params.max_keypoints = config.keypoint_cap;
    const SiftExtractor extractor(sift_params);

    // Extract once; every grid cell replays the same descriptor sets.
    std::vector<RefineView> views;
    std::vector<DescriptorSet> descriptors;
    views.reserve(dataset.poses.size());
    descriptors.reserve(dataset.poses.size());
    for (const auto& r : dataset.poses) {
        views.push_back({r.id, r.pose});
        descriptors.push_back(extractor.extract(to_grayscale(load_rgb(dataset, r.id))));
    }
    const auto descriptors_for = [&](const RefineView& view) {
        for (size_t i = 0; i < views.size(); ++i) {
            if (views[i].id == view.id) return descriptors[i];
        }
        throw std::runtime_error("sweep: unknown view id");
    };

    const ReconResult baseline_recon = reconstruct_views(dataset, config, {});
    const double epsilon = default_epsilon(config);

    std::vector<SweepRow> rows;
    for (const int n : region_counts) {
        for (const int w : word_counts) {
            RunConfig cell = config;
            cell.bov.regions = n;
            cell.bov.words_per_region = w;
            const RefineResult refined = refine_dataset(views, descriptors_for, cell.bov);
            const ReconResult recon = reconstruct_views(dataset, cell, refined.accepted_ids);
            SweepRow row;
            row.regions = n;
            row.words = w;
            row.selected = int(refined.accepted_ids.size());
            row.report = compare_clouds(recon.cloud, baseline_recon.cloud, epsilon,
                                        row.selected, baseline_recon.view_count);
            rows.push_back(row);
        }
    }

    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : rows) {
        j.push_back({{"regions", row.regions},
                     {"words", row.words},
                     {"selected_views", row.selected},
                     {"baseline_views", row.report.baseline_view_count},
                     {"hausdorff_cm", row.report.hausdorff_m * 100.0},
                     {"chamfer_cm", row.report.chamfer_m * 100.0},
                     {"coverage", row.report.coverage}});
    }
    std::ofstream out((fs::path(out_dir) / "sweep.json").string());
    out << j.dump(2) << "\n";
    return rows;
}

void write_report(const std::string& path, const MetricsReport& report) {
    nlohmann::json j{{"view_count", report.view_count},
                     {"baseline_view_count", report.baseline_view_count},
                     {"hausdorff_cm", report.hausdorff_m * 100.0},
                     {"chamfer_cm", report.chamfer_m * 100.0},
                     {"coverage", report.coverage},
                     {"epsilon_m", report.epsilon_m}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << j.dump(2) << "\n";
}

std::string format_report(const MetricsReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "views: %d / baseline %d\nhausdorff: %.4f cm\nchamfer:   %.4f cm\n"
                  "coverage:  %.4f (eps %.4f m)",
                  report.view_count, report.baseline_view_count, report.hausdorff_m * 100.0,
                  report.chamfer_m * 100.0, report.coverage, report.epsilon_m);
    return buf;
}

}  // namespace viewplan
