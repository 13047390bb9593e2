#include "npslice/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace npslice {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void open_or_throw(std::ofstream& f, const std::string& path) {
    f.open(path, std::ios::binary);
    if (!f) throw std::runtime_error("pipeline_cli: cannot write " + path);
}

} // namespace

void export_toolpath_json(const std::vector<Toolpath>& paths, const SlicerConfig& cfg,
                          const std::string& path) {
    std::ofstream f;
    open_or_throw(f, path);
    f << "{\n  \"config\": {";
    f << "\"layer_height\": " << fmt(cfg.layer_height);
    f << ", \"extrusion_width\": " << fmt(cfg.extrusion_width);
    f << ", \"threshold_angle_deg\": " << fmt(cfg.threshold_angle_deg);
    f << ", \"wall_count\": " << cfg.wall_count;
    f << ", \"nonplanar_layer_count\": " << cfg.nonplanar_layer_count;
    f << ", \"infill_spacing\": " << fmt(cfg.infill_spacing);
    f << ", \"infill_base_angle_deg\": " << fmt(cfg.infill_base_angle_deg);
    f << ", \"extruder_box\": [" << fmt(cfg.extruder_box.x) << ", " << fmt(cfg.extruder_box.y)
      << ", " << fmt(cfg.extruder_box.z) << "]";
    f << "},\n  \"paths\": [";
    for (size_t i = 0; i < paths.size(); ++i) {
        const Toolpath& tp = paths[i];
        f << (i ? ",\n    {" : "\n    {");
        f << "\"role\": \"" << to_string(tp.role) << "\"";
        f << ", \"kind\": \"" << to_string(tp.kind) << "\"";
        f << ", \"layer\": " << tp.layer;
        f << ", \"patch\": ";
        if (tp.patch < 0)
            f << "null";
        else
            f << tp.patch;
        f << ", \"points\": [";
        for (size_t j = 0; j < tp.points.size(); ++j) {
            const ToolpathPoint& p = tp.points[j];
            f << (j ? "," : "") << "\n      {\"x\": " << fmt(p.position.x)
              << ", \"y\": " << fmt(p.position.y) << ", \"z\": " << fmt(p.position.z)
              << ", \"nx\": " << fmt(p.orientation.x) << ", \"ny\": " << fmt(p.orientation.y)
              << ", \"nz\": " << fmt(p.orientation.z) << ", \"e\": " << (p.extruding ? "true" : "false")
              << "}";
        }
        f << (tp.points.empty() ? "]" : "\n    ]") << "}";
    }
    f << (paths.empty() ? "]" : "\n  ]") << "\n}\n";
}

void write_report_json(const PipelineResult& result, const std::string& path) {
    nlohmann::ordered_json j;
    if (result.has_metrics) {
        j["cd_planar_mm"] = result.metrics.cd_planar_mm;
        j["cd_nonplanar_mm"] = result.metrics.cd_nonplanar_mm;
    } else {
        j["cd_planar_mm"] = nullptr;
        j["cd_nonplanar_mm"] = nullptr;
    }
    j["patches"] = result.patch_count;
    j["planar_layers"] = result.planar_layer_count;
    j["nonplanar_layers"] = result.nonplanar_layer_count;
    j["warnings"] = result.warnings;
    std::ofstream f;
    open_or_throw(f, path);
    f << j.dump(2) << "\n";
}

void write_report_txt(const PipelineResult& result, const std::string& path) {
    std::ofstream f;
    open_or_throw(f, path);
    f << "patches: " << result.patch_count << "\n";
    f << "planar layers: " << result.planar_layer_count << "\n";
    f << "non-planar layers: " << result.nonplanar_layer_count << "\n";
    f << "toolpaths: " << result.paths.size() << "\n";
    if (result.has_metrics) {
        f << "chamfer distance, planar reconstruction: " << fmt(result.metrics.cd_planar_mm)
          << " mm\n";
        f << "chamfer distance, non-planar reconstruction: " << fmt(result.metrics.cd_nonplanar_mm)
          << " mm\n";
    }
    for (const std::string& w : result.warnings) f << "warning: " << w << "\n";
}

void write_layer_svgs(const std::vector<Layer>& layers, const std::string& dir) {
    for (const Layer& layer : layers) {
        Box2 bb = region_bbox(layer.chains);
        if (!bb.valid()) bb = Box2{{0, 0}, {1, 1}};
        double pad = 1.0;
        char name[64];
        std::snprintf(name, sizeof(name), "/layer_%04d.svg", layer.index);
        std::ofstream f;
        open_or_throw(f, dir + name);
        f << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(bb.lo.x - pad) << " "
          << fmt(bb.lo.y - pad) << " " << fmt(bb.size().x + 2 * pad) << " "
          << fmt(bb.size().y + 2 * pad) << "\">\n";
        f << "<path fill-rule=\"evenodd\" fill=\"#dddddd\" stroke=\"none\" d=\"";
        for (const PolygonChain& c : layer.chains) {
            for (size_t i = 0; i < c.pts.size(); ++i)
                f << (i == 0 ? "M" : "L") << fmt(c.pts[i].x) << " " << fmt(c.pts[i].y) << " ";
            f << "Z ";
        }
        f << "\"/>\n";
        for (const PolygonChain& w : layer.walls) {
            f << "<path fill=\"none\" stroke=\"#c04000\" stroke-width=\"0.1\" d=\"";
            for (size_t i = 0; i < w.pts.size(); ++i)
                f << (i == 0 ? "M" : "L") << fmt(w.pts[i].x) << " " << fmt(w.pts[i].y) << " ";
            f << "Z\"/>\n";
        }
        for (const auto& line : layer.infill) {
            f << "<path fill=\"none\" stroke=\"#0060c0\" stroke-width=\"0.08\" d=\"";
            for (size_t i = 0; i < line.size(); ++i)
                f << (i == 0 ? "M" : "L") << fmt(line[i].x) << " " << fmt(line[i].y) << " ";
            f << "\"/>\n";
        }
        f << "</svg>\n";
    }
}

void write_cross_sections(const TriangleMesh& mesh, const PipelineResult& result,
                          const SlicerConfig& cfg, const std::string& dir) {
    if (!result.has_metrics) return;
    const Box2& region = result.comparison_region;

    auto emit = [&](const std::string& path, bool along_x) {
        // A one-row sampling band through the region center.
        Box2 band = region;
        if (along_x) {
            double yc = (region.lo.y + region.hi.y) / 2;
            band.lo.y = band.hi.y = yc;
        } else {
            double xc = (region.lo.x + region.hi.x) / 2;
            band.lo.x = band.hi.x = xc;
        }
        int n = 512;
        int nx = along_x ? n : 1;
        int ny = along_x ? 1 : n;

        std::ofstream f;
        open_or_throw(f, path);
        f << "# coordinate z  (cut " << (along_x ? "along x at y=" : "along y at x=")
          << fmt(along_x ? band.lo.y : band.lo.x) << ")\n";
        auto dump = [&](const char* label, const PointSet& set) {
            f << "# " << label << "\n";
            for (const Vec3& p : set.points) f << fmt(along_x ? p.x : p.y) << " " << fmt(p.z) << "\n";
            f << "\n";
        };
        dump("source", sample_mesh_surface(mesh, band, nx, ny));
        dump("planar", reconstruct_deposited_surface(result.baseline_paths, cfg, band, nx, ny));
        dump("nonplanar", reconstruct_deposited_surface(result.paths, cfg, band, nx, ny));
    };

    emit(dir + "/cross_section_plane_y.txt", true);
    emit(dir + "/cross_section_plane_x.txt", false);
}

void write_paths_obj(const std::vector<Toolpath>& paths, const std::string& path) {
    std::ofstream f;
    open_or_throw(f, path);
    int base = 1;
    for (const Toolpath& tp : paths) {
        for (const ToolpathPoint& p : tp.points)
            f << "v " << fmt(p.position.x) << " " << fmt(p.position.y) << " " << fmt(p.position.z)
              << "\n";
        if (tp.points.size() >= 2) {
            f << "l";
            for (size_t i = 0; i < tp.points.size(); ++i) f << " " << base + static_cast<int>(i);
            f << "\n";
        }
        base += static_cast<int>(tp.points.size());
    }
}

} // namespace npslice
