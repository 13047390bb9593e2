#include "npslice/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "npslice/export.hpp"
#include "npslice/infill.hpp"
#include "npslice/nonplanar.hpp"
#include "npslice/projection.hpp"
#include "npslice/surface_offset.hpp"

namespace npslice {

namespace {

struct PatchWork {
    SurfacePatch patch;
    PatchStack stack;
    double min_z = 0.0;
};

Toolpath planar_wall_path(const PolygonChain& chain, double z, PathRole role, int layer) {
    Toolpath tp;
    tp.role = role;
    tp.kind = PathKind::Planar;
    tp.layer = layer;
    tp.points.reserve(chain.pts.size() + 1);
    for (const Vec2& p : chain.pts) tp.points.push_back({{p.x, p.y, z}, {0, 0, 1}, true});
    const Vec2& first = chain.pts.front();
    tp.points.push_back({{first.x, first.y, z}, {0, 0, 1}, true});
    return tp;
}

// One infill toolpath per layer: sub-polygon serpentines joined in adjacency
// order, with lifted non-extruding hops in between.
Toolpath planar_infill_path(Layer& layer, const SlicerConfig& cfg) {
    Toolpath tp;
    tp.role = PathRole::Infill;
    tp.kind = PathKind::Planar;
    tp.layer = layer.index;
    double z = slice_plane_z(cfg, layer.index);
    double hop_z = z + 1.0;

    WallSet ws = generate_walls(layer.chains, cfg);
    for (const Region& ring : ws.walls)
        for (const PolygonChain& chain : ring) layer.walls.push_back(chain);

    if (ws.infill_boundary.empty()) return tp;
    double angle = infill_angle(layer.index, cfg.infill_base_angle_deg);
    auto subpolys = decompose_monotone(ws.infill_boundary, angle);
    auto order = order_subpolygons(subpolys);
    for (int idx : order) {
        InfillPath fill = zigzag(subpolys[idx], cfg.infill_spacing, angle);
        if (fill.polyline.size() < 2) continue;
        layer.infill.push_back(fill.polyline);
        std::vector<ToolpathPoint> pts;
        pts.reserve(fill.polyline.size());
        for (const Vec2& p : fill.polyline) pts.push_back({{p.x, p.y, z}, {0, 0, 1}, true});
        if (tp.points.empty()) {
            tp.points = std::move(pts);
        } else {
            ToolpathPoint up = tp.points.back();
            up.position.z = hop_z;
            up.extruding = false;
            ToolpathPoint over = pts.front();
            over.position.z = hop_z;
            over.extruding = false;
            ToolpathPoint down = pts.front();
            down.extruding = false;
            tp.points.push_back(up);
            tp.points.push_back(over);
            tp.points.push_back(down);
            tp.points.insert(tp.points.end(), pts.begin(), pts.end());
        }
    }
    return tp;
}

} // namespace

PipelineResult run_pipeline(const TriangleMesh& mesh, const SlicerConfig& cfg, bool force_planar,
                            bool compute_metrics) {
    cfg.validate();
    PipelineResult result;

    // Detection and offsetting.
    std::vector<PatchWork> works;
    if (!force_planar) {
        PatchReport prep;
        auto patches = extract_nonplanar_surface(mesh, cfg, &prep);
        result.warnings.push_back(
            "nonplanar_id: " + std::to_string(prep.candidate_triangles) + " candidate triangles, " +
            std::to_string(prep.occlusion_discarded) + " lost to occlusion, " +
            std::to_string(prep.collision_discarded) + " lost to collision, " +
            std::to_string(prep.small_patches_discarded) + " small patches discarded");
        for (SurfacePatch& patch : patches) {
            PatchWork w;
            w.patch = std::move(patch);
            w.stack = build_patch_stack(mesh, w.patch, cfg, &result.warnings);
            if (w.stack.effective_layers == 0) continue;
            double mz = std::numeric_limits<double>::max();
            for (int t : w.patch.triangles)
                for (int k = 0; k < 3; ++k) mz = std::min(mz, mesh.tri_vertex(t, k).z);
            w.min_z = mz;
            works.push_back(std::move(w));
        }
        // Print order: lowest patch first; ids follow print order.
        std::stable_sort(works.begin(), works.end(),
                         [](const PatchWork& a, const PatchWork& b) { return a.min_z < b.min_z; });
        for (size_t i = 0; i < works.size(); ++i) works[i].patch.id = static_cast<int>(i);
    }
    result.patch_count = static_cast<int>(works.size());

    // Planar body.
    std::vector<TriangleMesh> spaces;
    spaces.reserve(works.size());
    for (const PatchWork& w : works) spaces.push_back(w.stack.space);
    result.layers = generate_layers(mesh, spaces, cfg, &result.warnings);
    result.planar_layer_count = static_cast<int>(result.layers.size());

    for (Layer& layer : result.layers) {
        if (layer.chains.empty()) continue;
        double z = slice_plane_z(cfg, layer.index);
        WallSet ws = generate_walls(layer.chains, cfg);
        bool outer = true;
        for (const Region& ring : ws.walls) {
            for (const PolygonChain& chain : ring)
                result.paths.push_back(planar_wall_path(
                    chain, z, outer ? PathRole::OuterWall : PathRole::InnerWall, layer.index));
            outer = false;
        }
        Toolpath fill = planar_infill_path(layer, cfg);
        if (!fill.points.empty()) result.paths.push_back(std::move(fill));
    }

    // Curved top layers, printed after the whole planar body.
    for (const PatchWork& w : works) {
        auto paths = generate_nonplanar_layers(w.stack.surfaces, w.patch.id, cfg,
                                               result.planar_layer_count, &result.warnings);
        result.nonplanar_layer_count += static_cast<int>(w.stack.surfaces.size());
        for (Toolpath& tp : paths) result.paths.push_back(std::move(tp));
    }

    // Approach travel: each path after the first starts with a lifted
    // non-extruding hop from the previous path's end point.
    double mesh_top = mesh.bbox().valid() ? mesh.bbox().hi.z : 0.0;
    for (size_t i = 1; i < result.paths.size(); ++i) {
        Toolpath& cur = result.paths[i];
        const Toolpath& prev = result.paths[i - 1];
        if (cur.points.empty() || prev.points.empty()) continue;
        Vec3 from = prev.points.back().position;
        Vec3 to = cur.points.front().position;
        double hop_z = std::max(from.z, to.z) + 1.0;
        if (cur.kind == PathKind::NonPlanar || prev.kind == PathKind::NonPlanar)
            hop_z = std::max(hop_z, mesh_top + 1.0);
        ToolpathPoint up{{from.x, from.y, hop_z}, {0, 0, 1}, false};
        ToolpathPoint over{{to.x, to.y, hop_z}, {0, 0, 1}, false};
        cur.points.front().extruding = false;  // arrival is the descent
        cur.points.insert(cur.points.begin(), {up, over});
    }

    // Comparison region: xy bounding box over the detected patches.
    Box2 region;
    for (const PatchWork& w : works)
        for (int t : w.patch.triangles)
            for (int k = 0; k < 3; ++k) region.expand(mesh.tri_vertex(t, k).xy());
    if (!region.valid()) {
        Box3 bb = mesh.bbox();
        region.expand(bb.lo.xy());
        region.expand(bb.hi.xy());
    }
    result.comparison_region = region;

    if (compute_metrics) {
        if (force_planar) {
            result.warnings.push_back("metrics: skipped, accuracy comparison needs a non-planar run");
        } else {
            PipelineResult baseline = run_pipeline(mesh, cfg, true, false);
            result.metrics =
                accuracy_report(mesh, baseline.paths, result.paths, cfg, result.comparison_region);
            result.has_metrics = true;
            result.baseline_paths = std::move(baseline.paths);
        }
    }
    return result;
}

namespace {

int category_of(const std::exception& e) {
    std::string what = e.what();
    if (what.rfind("config:", 0) == 0) return 2;
    if (what.rfind("mesh_io:", 0) == 0) return 3;
    return 4;
}

} // namespace

int run(const JobConfig& job) {
    namespace fs = std::filesystem;
    try {
        job.slicer.validate();

        // Probe the output directory before any work so failures leave no
        // partial files behind.
        std::error_code ec;
        fs::create_directories(job.output_dir, ec);
        std::string probe = job.output_dir + "/.npslice_probe";
        {
            std::ofstream pf(probe);
            if (!pf) {
                std::cerr << "pipeline_cli: output directory not writable: " << job.output_dir
                          << "\n";
                return 2;
            }
        }
        fs::remove(probe, ec);

        TriangleMesh mesh = load_stl(job.input_path);
        PipelineResult result = run_pipeline(mesh, job.slicer, job.force_planar, job.compute_metrics);

        if (job.export_toolpath)
            export_toolpath_json(result.paths, job.slicer, job.output_dir + "/toolpath.json");
        if (job.export_svg) write_layer_svgs(result.layers, job.output_dir);
        if (job.export_obj) write_paths_obj(result.paths, job.output_dir + "/paths.obj");
        if (result.has_metrics) write_cross_sections(mesh, result, job.slicer, job.output_dir);
        write_report_txt(result, job.output_dir + "/report.txt");
        write_report_json(result, job.output_dir + "/report.json");

        for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        int cat = category_of(e);
        std::cerr << "error: " << e.what() << "\n";
        return cat;
    }
}

} // namespace npslice
