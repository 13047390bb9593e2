#pragma once

#include <string>
#include <vector>

#include "npslice/config.hpp"
#include "npslice/mesh.hpp"
#include "npslice/metrics.hpp"
#include "npslice/slicer.hpp"
#include "npslice/toolpath.hpp"

namespace npslice {

struct JobConfig {
    SlicerConfig slicer;
    std::string input_path;
    std::string output_dir = ".";
    bool export_toolpath = true;
    bool export_svg = false;
    bool export_obj = false;
    bool compute_metrics = false;
    bool force_planar = false;
    unsigned seed = 0;  // reserved; the pipeline is deterministic without it
};

struct PipelineResult {
    std::vector<Toolpath> paths;
    std::vector<Toolpath> baseline_paths;  // forced-planar run, present with metrics
    std::vector<Layer> layers;
    int patch_count = 0;
    int planar_layer_count = 0;
    int nonplanar_layer_count = 0;
    Box2 comparison_region;
    bool has_metrics = false;
    AccuracyResult metrics;
    std::vector<std::string> warnings;
};

/// Full slicing pass over a loaded mesh. With force_planar the detection
/// stage is skipped and the whole object is sliced with planar layers.
PipelineResult run_pipeline(const TriangleMesh& mesh, const SlicerConfig& cfg, bool force_planar,
                            bool compute_metrics);

/// Loads the input, runs the pipeline and writes all requested artifacts.
/// Returns a process exit code: 0 success, 2 configuration, 3 input, 4
/// geometry failure.
int run(const JobConfig& job);

} // namespace npslice
