#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viewplan/config.hpp"
#include "viewplan/dataset.hpp"
#include "viewplan/metrics.hpp"
#include "viewplan/planner.hpp"

namespace viewplan {

// Command implementations behind the CLI verbs; tests drive these
// directly. Every command is reproducible from (manifest, seeds) and
// never modifies its input dataset.

struct ReconResult {
    TriangleMesh mesh;
    PointCloud cloud;
    int view_count = 0;
};

/// Renders the full hemisphere plan into a fresh dataset; returns the
/// number of views.
int cmd_scan(const RunConfig& config, const std::string& out_dir);

/// TSDF-fuse the listed views (all when ids is empty) of a dataset.
ReconResult reconstruct_views(const Dataset& dataset, const RunConfig& config,
                              const std::vector<int>& ids);

double default_epsilon(const RunConfig& config);  // 2 * voxel_size unless configured

struct RefineOutputs {
    std::vector<int> selected_ids;
    MetricsReport report;
};

/// Offline refinement: select views, reconstruct both the selection and
/// the full baseline, compare. Writes selected_ids.txt, bov.json, the
/// four PLY outputs, and report.json under out_dir.
RefineOutputs cmd_refine(const Dataset& dataset, const RunConfig& config,
                         const std::string& out_dir, const std::string& cache_dir = "");

struct NbvOutputs {
    EpisodeRecord episode;
    MetricsReport report;
    int captured_views = 0;
};

/// Greedy NBV episode: captures a dataset, writes episode.jsonl,
/// reconstructs the captures, and evaluates against a baseline cloud
/// (an existing PLY, or a baseline scan rendered under out_dir).
NbvOutputs cmd_plan_nbv(const RunConfig& config, const std::string& out_dir,
                        const std::string& baseline_cloud_path = "");

MetricsReport cmd_eval(const std::string& recon_ply, const std::string& baseline_ply,
                       double epsilon_m);

struct SweepRow {
    int regions = 0;
    int words = 0;
    int selected = 0;
    MetricsReport report;
};

/// Table-II-style ablation over the N x W grid on one dataset; rows in
/// grid order, also written to sweep.json under out_dir.
std::vector<SweepRow> cmd_sweep(const Dataset& dataset, const RunConfig& config,
                                const std::vector<int>& region_counts,
                                const std::vector<int>& word_counts, const std::string& out_dir);

void write_report(const std::string& path, const MetricsReport& report);
std::string format_report(const MetricsReport& report);  // cm, 4 decimals

}  // namespace viewplan
