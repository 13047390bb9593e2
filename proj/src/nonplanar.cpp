#include "npslice/nonplanar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace npslice {

double threshold_angle(double layer_height, double extrusion_width) {
    if (layer_height <= 0 || extrusion_width <= 0)
        throw std::invalid_argument("nonplanar_id: layer height and extrusion width must be positive");
    return rad_to_deg(std::atan(layer_height / extrusion_width));
}

bool classify_triangle(const Vec3& facet_normal, double threshold_angle_deg) {
    if (facet_normal.z <= 0) return false;
    double nz = std::clamp(facet_normal.z / facet_normal.norm(), -1.0, 1.0);
    // angle(normal, z) < threshold, strict: ties go planar. Compared in
    // cosine space to keep the boundary exact.
    return nz > std::cos(deg_to_rad(threshold_angle_deg));
}

TriangleGrid::TriangleGrid(const TriangleMesh& mesh) : mesh_(&mesh) {
    for (const Vec3& v : mesh.vertices) world_.expand(v.xy());
    if (!world_.valid() || mesh.triangles.empty()) return;
    Vec2 span = world_.size();
    double area = std::max(span.x * span.y, 1e-6);
    cell_ = std::max(std::sqrt(area / mesh.triangles.size()), 1e-3);
    nx_ = std::max(1, static_cast<int>(std::ceil(span.x / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(span.y / cell_)));
    cells_.resize(static_cast<size_t>(nx_) * ny_);
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        Box2 bb;
        for (int k = 0; k < 3; ++k) bb.expand(mesh.tri_vertex(static_cast<int>(t), k).xy());
        int cx0 = std::clamp(static_cast<int>((bb.lo.x - world_.lo.x) / cell_), 0, nx_ - 1);
        int cx1 = std::clamp(static_cast<int>((bb.hi.x - world_.lo.x) / cell_), 0, nx_ - 1);
        int cy0 = std::clamp(static_cast<int>((bb.lo.y - world_.lo.y) / cell_), 0, ny_ - 1);
        int cy1 = std::clamp(static_cast<int>((bb.hi.y - world_.lo.y) / cell_), 0, ny_ - 1);
        for (int cx = cx0; cx <= cx1; ++cx)
            for (int cy = cy0; cy <= cy1; ++cy)
                cells_[static_cast<size_t>(cy) * nx_ + cx].push_back(static_cast<int>(t));
    }
}

std::vector<int> TriangleGrid::query(const Box2& box) const {
    std::vector<int> out;
    if (cells_.empty()) return out;
    int cx0 = std::clamp(static_cast<int>((box.lo.x - world_.lo.x) / cell_), 0, nx_ - 1);
    int cx1 = std::clamp(static_cast<int>((box.hi.x - world_.lo.x) / cell_), 0, nx_ - 1);
    int cy0 = std::clamp(static_cast<int>((box.lo.y - world_.lo.y) / cell_), 0, ny_ - 1);
    int cy1 = std::clamp(static_cast<int>((box.hi.y - world_.lo.y) / cell_), 0, ny_ - 1);
    for (int cx = cx0; cx <= cx1; ++cx)
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int t : cells_[static_cast<size_t>(cy) * nx_ + cx]) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> TriangleGrid::query(const Vec2& p) const {
    Box2 b;
    b.expand(p);
    return query(b);
}

namespace {

// z of the triangle's plane at the xy point, when the footprint covers it
// (inclusive boundaries). Returns false for xy-degenerate triangles.
bool vertical_hit(const TriangleMesh& mesh, int tri, const Vec2& p, double* z_hit) {
    Vec2 a = mesh.tri_vertex(tri, 0).xy();
    Vec2 b = mesh.tri_vertex(tri, 1).xy();
    Vec2 c = mesh.tri_vertex(tri, 2).xy();
    Vec2 u = b - a, v = c - a, w = p - a;
    double denom = u.cross(v);
    if (std::abs(denom) < 1e-12) return false;
    double s = w.cross(v) / denom;
    double t = u.cross(w) / denom;
    constexpr double eps = 1e-9;
    if (s < -eps || t < -eps || s + t > 1 + eps) return false;
    double za = mesh.tri_vertex(tri, 0).z;
    double zb = mesh.tri_vertex(tri, 1).z;
    double zc = mesh.tri_vertex(tri, 2).z;
    *z_hit = za + s * (zb - za) + t * (zc - za);
    return true;
}

} // namespace

bool occlusion_test(const Vec3& vertex, const TriangleMesh& mesh, const TriangleGrid& grid) {
    double z0 = vertex.z + kRayEpsilon;
    for (int t : grid.query(vertex.xy())) {
        double z_hit;
        if (vertical_hit(mesh, t, vertex.xy(), &z_hit) && z_hit > z0) return true;
    }
    return false;
}

bool occlusion_test(const Vec3& vertex, const TriangleMesh& mesh) {
    return occlusion_test(vertex, mesh, TriangleGrid(mesh));
}

bool triangle_box_overlap(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& box_lo,
                          const Vec3& box_hi) {
    Vec3 c = (box_lo + box_hi) * 0.5;
    Vec3 h = (box_hi - box_lo) * 0.5;
    if (h.x < 0 || h.y < 0 || h.z < 0) return false;
    Vec3 a = v0 - c, b = v1 - c, d = v2 - c;

    auto axis_test = [&](const Vec3& axis, double extent) {
        double pa = a.dot(axis), pb = b.dot(axis), pd = d.dot(axis);
        double lo = std::min({pa, pb, pd});
        double hi = std::max({pa, pb, pd});
        return lo > extent || hi < -extent;
    };

    // Box face normals.
    if (std::min({a.x, b.x, d.x}) > h.x || std::max({a.x, b.x, d.x}) < -h.x) return false;
    if (std::min({a.y, b.y, d.y}) > h.y || std::max({a.y, b.y, d.y}) < -h.y) return false;
    if (std::min({a.z, b.z, d.z}) > h.z || std::max({a.z, b.z, d.z}) < -h.z) return false;

    // Triangle plane.
    Vec3 n = (b - a).cross(d - a);
    double plane_r = h.x * std::abs(n.x) + h.y * std::abs(n.y) + h.z * std::abs(n.z);
    double plane_d = n.dot(a);
    if (plane_d > plane_r || plane_d < -plane_r) return false;

    // Nine edge cross axes.
    const Vec3 edges[3] = {b - a, d - b, a - d};
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& e : edges) {
        for (const Vec3& ax : axes) {
            Vec3 axis = ax.cross(e);
            if (axis.norm2() < 1e-18) continue;
            double extent = h.x * std::abs(axis.x) + h.y * std::abs(axis.y) + h.z * std::abs(axis.z);
            if (axis_test(axis, extent)) return false;
        }
    }
    return true;
}

bool collision_test(const Vec3& vertex, const TriangleMesh& mesh, const Vec3& box_dims,
                    const TriangleGrid& grid, const std::vector<char>& exclude_triangle) {
    // Shrink slightly so triangles merely touching a face do not count.
    constexpr double kShrink = 1e-7;
    Vec3 lo{vertex.x - box_dims.x / 2 + kShrink, vertex.y - box_dims.y / 2 + kShrink,
            vertex.z + kShrink};
    Vec3 hi{vertex.x + box_dims.x / 2 - kShrink, vertex.y + box_dims.y / 2 - kShrink,
            vertex.z + box_dims.z - kShrink};
    if (lo.x >= hi.x || lo.y >= hi.y || lo.z >= hi.z) return false;

    Box2 query;
    query.expand({lo.x, lo.y});
    query.expand({hi.x, hi.y});
    for (int t : grid.query(query)) {
        if (!exclude_triangle.empty() && exclude_triangle[t]) continue;
        if (triangle_box_overlap(mesh.tri_vertex(t, 0), mesh.tri_vertex(t, 1), mesh.tri_vertex(t, 2),
                                 lo, hi))
            return true;
    }
    return false;
}

bool collision_test(const Vec3& vertex, const TriangleMesh& mesh, const Vec3& box_dims) {
    return collision_test(vertex, mesh, box_dims, TriangleGrid(mesh), {});
}

std::vector<SurfacePatch> extract_nonplanar_surface(const TriangleMesh& mesh, const SlicerConfig& cfg,
                                                    PatchReport* report) {
    PatchReport rep;
    size_t n = mesh.triangles.size();
    std::vector<char> candidate(n, 0);
    for (size_t t = 0; t < n; ++t)
        candidate[t] = classify_triangle(mesh.facet_normals[t], cfg.threshold_angle_deg) ? 1 : 0;
    rep.candidate_triangles = static_cast<int>(std::count(candidate.begin(), candidate.end(), 1));

    TriangleGrid grid(mesh);

    // Per-vertex filter results, shared across incident triangles.
    enum class VertexState : char { Unknown, Ok, Occluded, Collides };
    std::vector<VertexState> vstate(mesh.vertices.size(), VertexState::Unknown);
    auto vertex_ok = [&](int vi) {
        VertexState& st = vstate[vi];
        if (st == VertexState::Unknown) {
            if (occlusion_test(mesh.vertices[vi], mesh, grid))
                st = VertexState::Occluded;
            else if (collision_test(mesh.vertices[vi], mesh, cfg.extruder_box, grid, candidate))
                st = VertexState::Collides;
            else
                st = VertexState::Ok;
        }
        return st;
    };

    std::vector<char> kept(n, 0);
    for (size_t t = 0; t < n; ++t) {
        if (!candidate[t]) continue;
        bool ok = true;
        bool occluded = false;
        for (int k = 0; k < 3 && ok; ++k) {
            VertexState st = vertex_ok(mesh.triangles[t][k]);
            if (st != VertexState::Ok) {
                ok = false;
                occluded = st == VertexState::Occluded;
            }
        }
        if (ok)
            kept[t] = 1;
        else
            ++(occluded ? rep.occlusion_discarded : rep.collision_discarded);
    }

    // Edge-connected components over the kept triangles.
    std::vector<int> component(n, -1);
    std::vector<SurfacePatch> patches;
    for (size_t seed = 0; seed < n; ++seed) {
        if (!kept[seed] || component[seed] >= 0) continue;
        SurfacePatch patch;
        std::vector<int> stack{static_cast<int>(seed)};
        component[seed] = static_cast<int>(patches.size());
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            patch.triangles.push_back(t);
            const auto& tri = mesh.triangles[t];
            for (int k = 0; k < 3; ++k) {
                auto it = mesh.edge_adjacency.find(edge_key(tri[k], tri[(k + 1) % 3]));
                if (it == mesh.edge_adjacency.end()) continue;
                for (int nb : it->second) {
                    if (!kept[nb] || component[nb] >= 0) continue;
                    component[nb] = component[seed];
                    stack.push_back(nb);
                }
            }
        }
        // Noise filter: features narrower than one bead cannot be printed
        // non-planar. Judged by footprint area rather than triangle count so
        // coarse meshes (a cube top is just two facets) keep their patches.
        double area2d = 0;
        for (int t : patch.triangles) {
            Vec2 a = mesh.tri_vertex(t, 0).xy();
            Vec2 b = mesh.tri_vertex(t, 1).xy();
            Vec2 c = mesh.tri_vertex(t, 2).xy();
            area2d += std::abs((b - a).cross(c - a)) / 2;
        }
        if (area2d < cfg.extrusion_width * cfg.extrusion_width) {
            ++rep.small_patches_discarded;
            continue;
        }
        std::sort(patch.triangles.begin(), patch.triangles.end());
        patches.push_back(std::move(patch));
    }

    std::sort(patches.begin(), patches.end(), [](const SurfacePatch& a, const SurfacePatch& b) {
        return a.triangles.front() < b.triangles.front();
    });
    for (size_t i = 0; i < patches.size(); ++i) patches[i].id = static_cast<int>(i);

    if (report) *report = rep;
    return patches;
}

Region extract_boundary(const TriangleMesh& mesh, const SurfacePatch& patch) {
    if (patch.triangles.empty())
        throw std::runtime_error("nonplanar_id: cannot extract the boundary of an empty patch");

    std::unordered_map<std::uint64_t, std::pair<int, std::array<int, 2>>> edge_use;
    for (int t : patch.triangles) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            auto& slot = edge_use[edge_key(a, b)];
            ++slot.first;
            slot.second = {a, b};
        }
    }
    std::vector<Segment2> segs;
    for (const auto& [key, slot] : edge_use) {
        (void)key;
        if (slot.first != 1) continue;
        segs.push_back({mesh.vertices[slot.second[0]].xy(), mesh.vertices[slot.second[1]].xy()});
    }

    SortReport rep;
    auto chains = sort_segments(segs, 1e-6, &rep);
    if (rep.open_chains > 0)
        throw std::runtime_error("nonplanar_id: open non-planar boundary (non-manifold input)");
    Region region;
    for (auto& c : chains)
        if (c.closed) region.push_back(std::move(c));
    identify_holes(region);
    return region;
}

} // namespace npslice
