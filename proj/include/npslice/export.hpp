#pragma once

#include <string>
#include <vector>

#include "npslice/config.hpp"
#include "npslice/pipeline.hpp"
#include "npslice/toolpath.hpp"

namespace npslice {

/// Canonical machine output. Deterministic: identical paths serialize to
/// byte-identical files.
void export_toolpath_json(const std::vector<Toolpath>& paths, const SlicerConfig& cfg,
                          const std::string& path);

void write_report_json(const PipelineResult& result, const std::string& path);
void write_report_txt(const PipelineResult& result, const std::string& path);
void write_layer_svgs(const std::vector<Layer>& layers, const std::string& dir);
void write_paths_obj(const std::vector<Toolpath>& paths, const std::string& path);

/// Raw surface cross-sections along the two mid-lines of the comparison
/// region (one cut along the hatching direction, one across), as plain-text
/// coordinate/height columns for external plotting.
void write_cross_sections(const TriangleMesh& mesh, const PipelineResult& result,
                          const SlicerConfig& cfg, const std::string& dir);

} // namespace npslice
