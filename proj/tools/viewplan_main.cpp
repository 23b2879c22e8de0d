#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viewplan/pipeline.hpp"

namespace {

using namespace viewplan;

// Manifest config with command-line overrides layered on top.
struct ConfigOverrides {
    std::optional<int> regions, words, keypoint_cap, candidates, budget, voxels;
    std::optional<double> distance_coefficient, truncation_voxels, epsilon;
    std::optional<uint64_t> kmeans_seed, planner_seed;
    std::optional<int> kmeans_iters;
    std::optional<uint64_t> pool_cap;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--regions", regions, "Bag-of-Views regions N");
        cmd->add_option("--words", words, "words per region W");
        cmd->add_option("--distance-coefficient", distance_coefficient,
                        "coefficient in 1 - c*cos (default 2)");
        cmd->add_option("--kmeans-seed", kmeans_seed, "k-means RNG seed");
        cmd->add_option("--kmeans-iters", kmeans_iters, "k-means max iterations");
        cmd->add_option("--pool-cap", pool_cap, "descriptor pool cap per region (0 = unbounded)");
        cmd->add_option("--keypoint-cap", keypoint_cap, "max keypoints per view");
        cmd->add_option("--candidates", candidates, "NBV candidates per step");
        cmd->add_option("--budget", budget, "NBV step budget");
        cmd->add_option("--seed", planner_seed, "planner seed");
        cmd->add_option("--voxels", voxels, "TSDF voxels per axis");
        cmd->add_option("--truncation-voxels", truncation_voxels, "TSDF truncation in voxels");
        cmd->add_option("--epsilon", epsilon, "coverage epsilon in meters (0 = 2*voxel)");
    }

    RunConfig apply(RunConfig c) const {
        if (regions) c.bov.regions = *regions;
        if (words) c.bov.words_per_region = *words;
        if (distance_coefficient) c.bov.distance_coefficient = *distance_coefficient;
        if (kmeans_seed) c.bov.kmeans_seed = *kmeans_seed;
        if (kmeans_iters) c.bov.kmeans_max_iters = *kmeans_iters;
        if (pool_cap) c.bov.pool_cap = *pool_cap;
        if (keypoint_cap) c.keypoint_cap = *keypoint_cap;
        if (candidates) c.candidates_per_step = *candidates;
        if (budget) c.budget = *budget;
        if (planner_seed) c.planner_seed = *planner_seed;
        if (voxels) c.voxels_per_axis = *voxels;
        if (truncation_voxels) c.truncation_voxels = *truncation_voxels;
        if (epsilon) c.coverage_epsilon_m = *epsilon;
        c.validate();
        return c;
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stoi(item));
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bag-of-Views view planning workbench"};
    app.require_subcommand(1);

    std::string config_path, dataset_dir, out_dir, cache_dir, baseline_cloud;
    std::string recon_ply, baseline_ply, select_file;
    std::string regions_list = "5,7,9,11", words_list = "10,20,30";
    double eval_epsilon = 0.01;
    ConfigOverrides overrides;

    auto* scan = app.add_subcommand("scan", "render a full-coverage hemisphere scan dataset");
    scan->add_option("--config", config_path, "run config JSON")->required();
    scan->add_option("--out", out_dir, "output dataset directory")->required();

    auto* refine = app.add_subcommand("refine", "Bag-of-Views offline dataset refinement");
    refine->add_option("--dataset", dataset_dir, "input dataset directory")->required();
    refine->add_option("--out", out_dir, "output directory")->required();
    refine->add_option("--cache", cache_dir, "descriptor cache directory");
    overrides.add_flags(refine);

    auto* plan = app.add_subcommand("plan-nbv", "greedy next-best-view episode");
    plan->add_option("--config", config_path, "run config JSON")->required();
    plan->add_option("--out", out_dir, "output directory")->required();
    plan->add_option("--baseline-cloud", baseline_cloud,
                     "baseline point cloud PLY (otherwise a baseline scan is rendered)");
    ConfigOverrides plan_overrides;
    plan_overrides.add_flags(plan);

    auto* recon = app.add_subcommand("reconstruct", "TSDF-fuse a dataset into mesh + cloud");
    recon->add_option("--dataset", dataset_dir, "input dataset directory")->required();
    recon->add_option("--out", out_dir, "output directory")->required();
    recon->add_option("--select", select_file, "optional selected-ids file");
    ConfigOverrides recon_overrides;
    recon_overrides.add_flags(recon);

    auto* eval = app.add_subcommand("eval", "compare two point clouds");
    eval->add_option("--recon", recon_ply, "reconstruction PLY")->required();
    eval->add_option("--baseline", baseline_ply, "baseline PLY")->required();
    eval->add_option("--epsilon", eval_epsilon, "coverage epsilon in meters");
    eval->add_option("--out", out_dir, "optional report.json path");

    auto* sweep = app.add_subcommand("sweep", "refine over an N x W grid and tabulate");
    sweep->add_option("--dataset", dataset_dir, "input dataset directory")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--regions-list", regions_list, "comma-separated N values");
    sweep->add_option("--words-list", words_list, "comma-separated W values");
    ConfigOverrides sweep_overrides;
    sweep_overrides.add_flags(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) {
            const RunConfig config = RunConfig::load(config_path);
            const int count = cmd_scan(config, out_dir);
            std::printf("scan: wrote %d views to %s\n", count, out_dir.c_str());
        } else if (refine->parsed()) {
            const Dataset dataset = open_dataset(dataset_dir);
            const RunConfig config = overrides.apply(dataset.config);
            const RefineOutputs out = cmd_refine(dataset, config, out_dir, cache_dir);
            std::printf("refine: selected %zu of %zu views\n%s\n", out.selected_ids.size(),
                        dataset.poses.size(), format_report(out.report).c_str());
        } else if (plan->parsed()) {
            const RunConfig config = plan_overrides.apply(RunConfig::load(config_path));
            const NbvOutputs out = cmd_plan_nbv(config, out_dir, baseline_cloud);
            std::printf("plan-nbv: %d captured views, total reward %.4f\n%s\n",
                        out.captured_views, out.episode.total_reward(),
                        format_report(out.report).c_str());
        } else if (recon->parsed()) {
            const Dataset dataset = open_dataset(dataset_dir);
            const RunConfig config = recon_overrides.apply(dataset.config);
            std::vector<int> ids;
            if (!select_file.empty()) ids = read_selected_ids(select_file);
            const ReconResult result = reconstruct_views(dataset, config, ids);
            std::filesystem::create_directories(out_dir);
            write_ply(out_dir + "/mesh.ply", result.mesh);
            write_ply(out_dir + "/cloud.ply", result.cloud);
            std::printf("reconstruct: %d views -> %zu vertices, %zu points\n", result.view_count,
                        result.mesh.vertices.size(), result.cloud.points.size());
        } else if (eval->parsed()) {
            const MetricsReport report = cmd_eval(recon_ply, baseline_ply, eval_epsilon);
            if (!out_dir.empty()) write_report(out_dir, report);
            std::printf("%s\n", format_report(report).c_str());
        } else if (sweep->parsed()) {
            const Dataset dataset = open_dataset(dataset_dir);
            const RunConfig config = sweep_overrides.apply(dataset.config);
            const auto rows = cmd_sweep(dataset, config, parse_int_list(regions_list),
                                        parse_int_list(words_list), out_dir);
            std::printf("%8s %8s %10s %14s %14s %10s\n", "N", "W", "selected", "hausdorff_cm",
                        "chamfer_cm", "coverage");
            for (const auto& row : rows) {
                std::printf("%8d %8d %10d %14.4f %14.4f %10.4f\n", row.regions, row.words,
                            row.selected, row.report.hausdorff_m * 100.0,
                            row.report.chamfer_m * 100.0, row.report.coverage);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
