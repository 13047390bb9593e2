#include "npslice/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npslice/infill.hpp"
#include "npslice/offset2d.hpp"

namespace npslice {

std::pair<double, double> barycentric(const Vec2& p, const Vec2& v0, const Vec2& v1, const Vec2& v2) {
    // Standard closed-form solve of p = v0 + s*u + t*v. (The printed source
    // formula for s repeats a (u.v) factor in the numerator; the projection
    // identities below are the consistent form, pinned by the vertex and
    // centroid checks.)
    Vec2 u = v1 - v0, v = v2 - v0, w = p - v0;
    double uu = u.dot(u), vv = v.dot(v), uv = u.dot(v);
    double wu = w.dot(u), wv = w.dot(v);
    double denom = uv * uv - uu * vv;
    if (std::abs(denom) < 1e-12)
        throw std::runtime_error("projection: degenerate triangle in barycentric solve");
    double s = (uv * wv - vv * wu) / denom;
    double t = (uv * wu - uu * wv) / denom;
    return {s, t};
}

bool point_in_triangle(const Vec2& p, const Vec2& v0, const Vec2& v1, const Vec2& v2, double eps) {
    auto [s, t] = barycentric(p, v0, v1, v2);
    return s >= -eps && t >= -eps && s + t <= 1 + eps;
}

SurfaceLocator::SurfaceLocator(const OffsetSurface& surface) : surface_(&surface) {
    internal_edges_ = surface_internal_edges(surface);

    for (const Vec3& v : surface.vertices) world_.expand(v.xy());
    if (!world_.valid()) return;
    size_t n = std::max(surface.triangles.size(), internal_edges_.size());
    Vec2 span = world_.size();
    double area = std::max(span.x * span.y, 1e-6);
    cell_ = std::max(std::sqrt(area / std::max<size_t>(n, 1)), 1e-3);
    nx_ = std::max(1, static_cast<int>(std::ceil(span.x / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(span.y / cell_)));
    tri_cells_.resize(static_cast<size_t>(nx_) * ny_);
    edge_cells_.resize(static_cast<size_t>(nx_) * ny_);

    auto for_cells = [&](const Box2& bb, auto&& fn) {
        int x0 = std::clamp(static_cast<int>((bb.lo.x - world_.lo.x) / cell_), 0, nx_ - 1);
        int x1 = std::clamp(static_cast<int>((bb.hi.x - world_.lo.x) / cell_), 0, nx_ - 1);
        int y0 = std::clamp(static_cast<int>((bb.lo.y - world_.lo.y) / cell_), 0, ny_ - 1);
        int y1 = std::clamp(static_cast<int>((bb.hi.y - world_.lo.y) / cell_), 0, ny_ - 1);
        for (int cx = x0; cx <= x1; ++cx)
            for (int cy = y0; cy <= y1; ++cy) fn(static_cast<size_t>(cy) * nx_ + cx);
    };

    for (size_t t = 0; t < surface.triangles.size(); ++t) {
        Box2 bb;
        for (int k = 0; k < 3; ++k) bb.expand(surface.vertices[surface.triangles[t][k]].xy());
        bb.lo -= Vec2{1e-3, 1e-3};
        bb.hi += Vec2{1e-3, 1e-3};
        for_cells(bb, [&](size_t c) { tri_cells_[c].push_back(static_cast<int>(t)); });
    }
    for (size_t e = 0; e < internal_edges_.size(); ++e) {
        Box2 bb;
        bb.expand(internal_edges_[e].a);
        bb.expand(internal_edges_[e].b);
        for_cells(bb, [&](size_t c) { edge_cells_[c].push_back(static_cast<int>(e)); });
    }
}

std::vector<int> SurfaceLocator::containing_triangles(const Vec2& p) const {
    std::vector<int> out;
    if (tri_cells_.empty()) return out;
    int cx = std::clamp(static_cast<int>((p.x - world_.lo.x) / cell_), 0, nx_ - 1);
    int cy = std::clamp(static_cast<int>((p.y - world_.lo.y) / cell_), 0, ny_ - 1);
    const OffsetSurface& s = *surface_;
    for (int t : tri_cells_[static_cast<size_t>(cy) * nx_ + cx]) {
        const auto& tri = s.triangles[t];
        if (point_in_triangle(p, s.vertices[tri[0]].xy(), s.vertices[tri[1]].xy(),
                              s.vertices[tri[2]].xy()))
            out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> SurfaceLocator::edges_near(const Box2& box) const {
    std::vector<int> out;
    if (edge_cells_.empty()) return out;
    int x0 = std::clamp(static_cast<int>((box.lo.x - world_.lo.x) / cell_), 0, nx_ - 1);
    int x1 = std::clamp(static_cast<int>((box.hi.x - world_.lo.x) / cell_), 0, nx_ - 1);
    int y0 = std::clamp(static_cast<int>((box.lo.y - world_.lo.y) / cell_), 0, ny_ - 1);
    int y1 = std::clamp(static_cast<int>((box.hi.y - world_.lo.y) / cell_), 0, ny_ - 1);
    for (int cx = x0; cx <= x1; ++cx)
        for (int cy = y0; cy <= y1; ++cy)
            for (int e : edge_cells_[static_cast<size_t>(cy) * nx_ + cx]) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ToolpathPoint project_point(const Vec2& p, const SurfaceLocator& locator) {
    const OffsetSurface& s = locator.surface();
    std::vector<int> hits = locator.containing_triangles(p);
    if (hits.empty())
        throw std::runtime_error("projection: projection miss at (" + std::to_string(p.x) + ", " +
                                 std::to_string(p.y) + ")");

    // The z source is the facet containing the point most interiorly; the
    // eps-relaxed hits only contribute to the orientation average. On exact
    // shared edges the candidate planes agree and the lowest index wins.
    int z_tri = hits.front();
    double best_interior = -std::numeric_limits<double>::max();
    double bs = 0, bt = 0;
    for (int t : hits) {
        const auto& tri = s.triangles[t];
        auto [cs, ct] = barycentric(p, s.vertices[tri[0]].xy(), s.vertices[tri[1]].xy(),
                                    s.vertices[tri[2]].xy());
        double interior = std::min({cs, ct, 1 - cs - ct});
        if (interior > best_interior + 1e-12) {
            best_interior = interior;
            z_tri = t;
            bs = cs;
            bt = ct;
        }
    }
    const auto& tri = s.triangles[z_tri];
    double z = s.vertices[tri[0]].z + bs * (s.vertices[tri[1]].z - s.vertices[tri[0]].z) +
               bt * (s.vertices[tri[2]].z - s.vertices[tri[0]].z);

    Vec3 orient{0, 0, 0};
    for (int t : hits) orient += s.facet_normals[t];
    orient = orient.normalized();
    if (orient.z <= 0)
        throw std::runtime_error("projection: downward tool orientation at projected point");

    ToolpathPoint tp;
    tp.position = {p.x, p.y, z};
    tp.orientation = orient;
    return tp;
}

std::vector<Vec2> subdivide_at_shared_edges(const std::vector<Vec2>& path,
                                            const SurfaceLocator& locator) {
    std::vector<Vec2> out;
    if (path.empty()) return out;
    out.push_back(path.front());
    const auto& edges = locator.internal_edges();
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        const Vec2& p = path[i];
        const Vec2& q = path[i + 1];
        double len = (q - p).norm();
        if (len <= 1e-12) continue;
        Box2 bb;
        bb.expand(p);
        bb.expand(q);
        std::vector<std::pair<double, Vec2>> cuts;
        for (int e : locator.edges_near(bb)) {
            const Segment2& edge = edges[e];
            Vec2 r = q - p, s = edge.b - edge.a;
            double denom = r.cross(s);
            double elen = s.norm();
            if (std::abs(denom) <= 1e-12 * len * elen) continue;  // parallel or collinear
            Vec2 ca = edge.a - p;
            double t = ca.cross(s) / denom;
            double u = ca.cross(r) / denom;
            if (t * len <= 1e-9 || (1.0 - t) * len <= 1e-9) continue;  // segment interior only
            if (u * elen < -1e-9 || (u - 1.0) * elen > 1e-9) continue;
            cuts.emplace_back(t, p + t * r);
        }
        std::sort(cuts.begin(), cuts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [t, pt] : cuts) {
            (void)t;
            if ((pt - out.back()).norm() > 1e-9) out.push_back(pt);
        }
        if ((q - out.back()).norm() > 1e-9)
            out.push_back(q);
        else
            out.back() = q;
    }
    return out;
}

namespace {

Toolpath project_polyline(const std::vector<Vec2>& polyline, const SurfaceLocator& locator,
                          PathRole role, int layer, int patch) {
    Toolpath tp;
    tp.role = role;
    tp.kind = PathKind::NonPlanar;
    tp.layer = layer;
    tp.patch = patch;
    std::vector<Vec2> fine = subdivide_at_shared_edges(polyline, locator);
    tp.points.reserve(fine.size());
    for (const Vec2& p : fine) tp.points.push_back(project_point(p, locator));
    return tp;
}

} // namespace

std::vector<Toolpath> nonplanar_walls(const Region& patch_boundary, const SurfaceLocator& locator,
                                      const SlicerConfig& cfg, std::vector<std::string>* warnings) {
    std::vector<Toolpath> out;
    for (int k = 0; k < cfg.wall_count; ++k) {
        Region ring = ss_offset(patch_boundary, (0.5 + k) * cfg.extrusion_width);
        if (ring.empty()) {
            if (warnings)
                warnings->push_back("projection: non-planar wall " + std::to_string(k) +
                                    " vanished (patch too small)");
            continue;
        }
        for (const PolygonChain& chain : ring) {
            std::vector<Vec2> loop = chain.pts;
            loop.push_back(chain.pts.front());
            out.push_back(project_polyline(loop, locator,
                                           k == 0 ? PathRole::OuterWall : PathRole::InnerWall, 0, 0));
        }
    }
    return out;
}

std::vector<Toolpath> nonplanar_infill(const Region& patch_boundary, const SurfaceLocator& locator,
                                       const SlicerConfig& cfg, int layer_index,
                                       std::vector<std::string>* warnings) {
    std::vector<Toolpath> out;
    Region boundary = ss_offset(patch_boundary, (0.5 + cfg.wall_count) * cfg.extrusion_width);
    if (boundary.empty()) {
        if (warnings) warnings->push_back("projection: non-planar infill boundary vanished");
        return out;
    }
    double angle = infill_angle(layer_index, cfg.infill_base_angle_deg);
    auto subpolys = decompose_monotone(boundary, angle);
    auto order = order_subpolygons(subpolys);

    Toolpath tp;
    tp.role = PathRole::Infill;
    tp.kind = PathKind::NonPlanar;
    tp.layer = layer_index;
    double hop_z = locator.surface().max_z() + 1.0;

    for (int idx : order) {
        InfillPath fill = zigzag(subpolys[idx], cfg.infill_spacing, angle);
        if (fill.polyline.size() < 2) continue;
        std::vector<Vec2> fine = subdivide_at_shared_edges(fill.polyline, locator);
        std::vector<ToolpathPoint> pts;
        pts.reserve(fine.size());
        for (const Vec2& p : fine) pts.push_back(project_point(p, locator));
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
    if (!tp.points.empty()) out.push_back(std::move(tp));
    return out;
}

std::vector<Toolpath> generate_nonplanar_layers(const std::vector<OffsetSurface>& surfaces,
                                                int patch_id, const SlicerConfig& cfg,
                                                int planar_layer_count,
                                                std::vector<std::string>* warnings) {
    std::vector<Toolpath> out;
    for (size_t i = 0; i < surfaces.size(); ++i) {
        const OffsetSurface& surface = surfaces[i];
        int layer_index = planar_layer_count + static_cast<int>(i);
        SurfaceLocator locator(surface);
        Region boundary = surface_boundary(surface);

        auto walls = nonplanar_walls(boundary, locator, cfg, warnings);
        for (Toolpath& w : walls) {
            w.layer = layer_index;
            w.patch = patch_id;
            out.push_back(std::move(w));
        }
        auto fills = nonplanar_infill(boundary, locator, cfg, layer_index, warnings);
        for (Toolpath& f : fills) {
            f.patch = patch_id;
            out.push_back(std::move(f));
        }
    }
    return out;
}

} // namespace npslice
