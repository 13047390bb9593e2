#include "npslice/surface_offset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace npslice {

Box2 OffsetSurface::footprint_bbox() const {
    Box2 b;
    for (const Vec3& v : vertices) b.expand(v.xy());
    return b;
}

double OffsetSurface::max_z() const {
    double z = std::numeric_limits<double>::lowest();
    for (const Vec3& v : vertices) z = std::max(z, v.z);
    return z;
}

std::unordered_map<int, Vec3> vertex_normals(const TriangleMesh& mesh, const SurfacePatch& patch) {
    if (patch.triangles.empty())
        throw std::runtime_error("surface_offset: vertex normals of an empty patch");
    std::unordered_map<int, Vec3> sums;
    for (int t : patch.triangles) {
        const Vec3& n = mesh.facet_normals[t];
        for (int k = 0; k < 3; ++k) sums[mesh.triangles[t][k]] += n;
    }
    for (auto& [vi, n] : sums) {
        double len = n.norm();
        if (len < 1e-9)
            throw std::runtime_error("surface_offset: zero-length normal sum at vertex " +
                                     std::to_string(vi));
        n = n / len;
    }
    return sums;
}

namespace {

// Segment vs triangle crossing with inclusive boundaries. Non-adjacent
// facets of a healthy surface are strictly separated, so grazing contact is
// already a defect; inclusiveness also catches symmetric fold-throughs whose
// piercing points land exactly on facet edges.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 n = (b - a).cross(c - a);
    double n2 = n.norm2();
    if (n2 < 1e-24) return false;
    double dp = n.dot(p - a);
    double dq = n.dot(q - a);
    if ((dp > 0) == (dq > 0)) return false;
    if (std::abs(dp - dq) < 1e-15) return false;
    double t = dp / (dp - dq);
    Vec3 x = p + t * (q - p);
    Vec3 u = b - a, v = c - a, w = x - a;
    double uu = u.dot(u), vv = v.dot(v), uv = u.dot(v);
    double wu = w.dot(u), wv = w.dot(v);
    double denom = uv * uv - uu * vv;
    if (std::abs(denom) < 1e-24) return false;
    double s = (uv * wv - vv * wu) / denom;
    double tt = (uv * wu - uu * wv) / denom;
    constexpr double eps = 1e-9;
    return s >= -eps && tt >= -eps && s + tt <= 1 + eps;
}

bool triangles_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                         const Vec3& b1, const Vec3& b2) {
    return segment_hits_triangle(a0, a1, b0, b1, b2) || segment_hits_triangle(a1, a2, b0, b1, b2) ||
           segment_hits_triangle(a2, a0, b0, b1, b2) || segment_hits_triangle(b0, b1, a0, a1, a2) ||
           segment_hits_triangle(b1, b2, a0, a1, a2) || segment_hits_triangle(b2, b0, a0, a1, a2);
}

void check_offset_validity(OffsetSurface& surface) {
    // Degenerate facets after the move.
    for (const auto& tri : surface.triangles) {
        const Vec3& a = surface.vertices[tri[0]];
        const Vec3& b = surface.vertices[tri[1]];
        const Vec3& c = surface.vertices[tri[2]];
        if ((b - a).cross(c - a).norm() < 2e-9)
            throw std::runtime_error("surface_offset: offset limit reached (degenerate facet)");
    }

    // Pairwise non-adjacent facet intersections, grid-accelerated in xy.
    size_t n = surface.triangles.size();
    Box2 world;
    std::vector<Box2> bbs(n);
    for (size_t t = 0; t < n; ++t) {
        for (int k = 0; k < 3; ++k) {
            Vec2 p = surface.vertices[surface.triangles[t][k]].xy();
            bbs[t].expand(p);
            world.expand(p);
        }
    }
    double cell = std::max(world.size().norm() / std::sqrt(static_cast<double>(n) + 1.0), 1e-3);
    int nx = std::max(1, static_cast<int>(std::ceil(world.size().x / cell)));
    int ny = std::max(1, static_cast<int>(std::ceil(world.size().y / cell)));
    std::vector<std::vector<int>> cells(static_cast<size_t>(nx) * ny);
    auto cell_range = [&](const Box2& bb, int& x0, int& x1, int& y0, int& y1) {
        x0 = std::clamp(static_cast<int>((bb.lo.x - world.lo.x) / cell), 0, nx - 1);
        x1 = std::clamp(static_cast<int>((bb.hi.x - world.lo.x) / cell), 0, nx - 1);
        y0 = std::clamp(static_cast<int>((bb.lo.y - world.lo.y) / cell), 0, ny - 1);
        y1 = std::clamp(static_cast<int>((bb.hi.y - world.lo.y) / cell), 0, ny - 1);
    };
    for (size_t t = 0; t < n; ++t) {
        int x0, x1, y0, y1;
        cell_range(bbs[t], x0, x1, y0, y1);
        for (int cx = x0; cx <= x1; ++cx)
            for (int cy = y0; cy <= y1; ++cy)
                cells[static_cast<size_t>(cy) * nx + cx].push_back(static_cast<int>(t));
    }

    auto adjacent = [&](int i, int j) {
        for (int ki = 0; ki < 3; ++ki)
            for (int kj = 0; kj < 3; ++kj)
                if (surface.triangles[i][ki] == surface.triangles[j][kj]) return true;
        return false;
    };

    std::vector<int> stamp(n, -1);
    for (size_t i = 0; i < n; ++i) {
        int x0, x1, y0, y1;
        cell_range(bbs[i], x0, x1, y0, y1);
        for (int cx = x0; cx <= x1; ++cx)
            for (int cy = y0; cy <= y1; ++cy)
                for (int j : cells[static_cast<size_t>(cy) * nx + cx]) {
                    if (j <= static_cast<int>(i) || stamp[j] == static_cast<int>(i)) continue;
                    stamp[j] = static_cast<int>(i);
                    if (!bbs[i].overlaps(bbs[j], 1e-9)) continue;
                    if (adjacent(static_cast<int>(i), j)) continue;
                    const auto& ta = surface.triangles[i];
                    const auto& tb = surface.triangles[j];
                    if (triangles_intersect(surface.vertices[ta[0]], surface.vertices[ta[1]],
                                            surface.vertices[ta[2]], surface.vertices[tb[0]],
                                            surface.vertices[tb[1]], surface.vertices[tb[2]])) {
                        surface.self_intersecting = true;
                        throw std::runtime_error(
                            "surface_offset: offset limit reached (self-intersecting surface)");
                    }
                }
    }
}

void finish_surface(OffsetSurface& surface) {
    surface.facet_normals.resize(surface.triangles.size());
    for (size_t t = 0; t < surface.triangles.size(); ++t) {
        const auto& tri = surface.triangles[t];
        surface.facet_normals[t] = (surface.vertices[tri[1]] - surface.vertices[tri[0]])
                                       .cross(surface.vertices[tri[2]] - surface.vertices[tri[0]])
                                       .normalized();
    }
    check_offset_validity(surface);
}

} // namespace

OffsetSurface offset_patch(const TriangleMesh& mesh, const SurfacePatch& patch, double d) {
    auto normals = vertex_normals(mesh, patch);

    OffsetSurface surface;
    surface.patch_id = patch.id;
    surface.offset_distance = d;

    std::vector<int> locals;
    locals.reserve(normals.size());
    for (const auto& [vi, n] : normals) locals.push_back(vi);
    std::sort(locals.begin(), locals.end());
    std::unordered_map<int, int> to_local;
    for (size_t i = 0; i < locals.size(); ++i) to_local[locals[i]] = static_cast<int>(i);

    surface.source_vertex = locals;
    surface.vertices.resize(locals.size());
    surface.vertex_normals.resize(locals.size());
    for (size_t i = 0; i < locals.size(); ++i) {
        const Vec3& n = normals[locals[i]];
        surface.vertex_normals[i] = n;
        surface.vertices[i] = mesh.vertices[locals[i]] + d * n;
    }
    surface.triangles.reserve(patch.triangles.size());
    for (int t : patch.triangles) {
        const auto& tri = mesh.triangles[t];
        surface.triangles.push_back({to_local[tri[0]], to_local[tri[1]], to_local[tri[2]]});
    }
    finish_surface(surface);
    return surface;
}

OffsetSurface offset_again(const OffsetSurface& src, double d) {
    OffsetSurface surface = src;
    surface.offset_distance = src.offset_distance + d;

    std::vector<Vec3> sums(src.vertices.size(), Vec3{});
    for (size_t t = 0; t < src.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k) sums[src.triangles[t][k]] += src.facet_normals[t];
    for (size_t i = 0; i < sums.size(); ++i) {
        double len = sums[i].norm();
        if (len < 1e-9)
            throw std::runtime_error("surface_offset: zero-length normal sum at vertex " +
                                     std::to_string(i));
        surface.vertex_normals[i] = sums[i] / len;
        surface.vertices[i] = src.vertices[i] + d * surface.vertex_normals[i];
    }
    finish_surface(surface);
    return surface;
}

TriangleMesh build_nonplanar_space(const TriangleMesh& mesh, const SurfacePatch& patch,
                                   const OffsetSurface& bottom) {
    TriangleMesh space;

    std::unordered_map<int, int> to_local;
    for (size_t i = 0; i < bottom.source_vertex.size(); ++i) to_local[bottom.source_vertex[i]] = static_cast<int>(i);

    size_t nv = bottom.source_vertex.size();
    space.vertices.resize(2 * nv);
    for (size_t i = 0; i < nv; ++i) {
        space.vertices[i] = mesh.vertices[bottom.source_vertex[i]];  // top = original patch
        space.vertices[nv + i] = bottom.vertices[i];
    }

    auto push_tri = [&space](int a, int b, int c) { space.triangles.push_back({a, b, c}); };

    // Top facets keep the patch winding (normals up); bottom facets reversed.
    std::unordered_map<std::uint64_t, std::pair<int, std::array<int, 2>>> edge_use;
    for (int t : patch.triangles) {
        const auto& tri = mesh.triangles[t];
        int a = to_local[tri[0]], b = to_local[tri[1]], c = to_local[tri[2]];
        push_tri(a, b, c);
        push_tri(a + static_cast<int>(nv), c + static_cast<int>(nv), b + static_cast<int>(nv));
        for (int k = 0; k < 3; ++k) {
            std::array<int, 3> loc{a, b, c};
            auto& slot = edge_use[edge_key(loc[k], loc[(k + 1) % 3])];
            ++slot.first;
            slot.second = {loc[k], loc[(k + 1) % 3]};
        }
    }

    // Side quads along the directed boundary; outward-facing winding.
    for (const auto& [key, slot] : edge_use) {
        (void)key;
        if (slot.first != 1) continue;
        int a = slot.second[0], b = slot.second[1];
        int ao = a + static_cast<int>(nv), bo = b + static_cast<int>(nv);
        push_tri(b, a, ao);
        push_tri(b, ao, bo);
    }

    space.facet_normals.resize(space.triangles.size());
    for (size_t t = 0; t < space.triangles.size(); ++t)
        space.facet_normals[t] = space.geometric_normal(static_cast<int>(t));
    space.edge_adjacency = build_edge_adjacency(space);
    if (!space.is_watertight())
        throw std::runtime_error("surface_offset: non-planar space is not watertight");
    return space;
}

std::vector<OffsetSurface> interior_layer_surfaces(const TriangleMesh& mesh, const SurfacePatch& patch,
                                                   const SlicerConfig& cfg,
                                                   std::vector<std::string>* warnings) {
    std::vector<OffsetSurface> surfaces;
    for (int k = cfg.nonplanar_layer_count - 1; k >= 0; --k) {
        double d = -(k + 0.5) * cfg.layer_height;
        try {
            surfaces.push_back(offset_patch(mesh, patch, d));
        } catch (const std::exception& e) {
            if (warnings)
                warnings->push_back("surface_offset: patch " + std::to_string(patch.id) + " layer depth " +
                                    std::to_string(-d) + " skipped: " + e.what());
        }
    }
    if (surfaces.empty() && warnings)
        warnings->push_back("surface_offset: patch " + std::to_string(patch.id) +
                            " has no usable offset surfaces, reverting to planar treatment");
    return surfaces;
}

PatchStack build_patch_stack(const TriangleMesh& mesh, const SurfacePatch& patch,
                             const SlicerConfig& cfg, std::vector<std::string>* warnings) {
    PatchStack stack;
    stack.surfaces = interior_layer_surfaces(mesh, patch, cfg, warnings);
    while (!stack.surfaces.empty()) {
        int effective = static_cast<int>(stack.surfaces.size());
        try {
            OffsetSurface bottom = offset_patch(mesh, patch, -effective * cfg.layer_height);
            stack.space = build_nonplanar_space(mesh, patch, bottom);
            stack.effective_layers = effective;
            return stack;
        } catch (const std::exception& e) {
            if (warnings)
                warnings->push_back("surface_offset: patch " + std::to_string(patch.id) +
                                    " space depth " + std::to_string(effective) + " failed (" + e.what() +
                                    "), reducing layer count");
            stack.surfaces.erase(stack.surfaces.begin());
        }
    }
    if (warnings)
        warnings->push_back("surface_offset: patch " + std::to_string(patch.id) +
                            " reverts to planar treatment");
    return stack;
}

Region surface_boundary(const OffsetSurface& surface) {
    std::unordered_map<std::uint64_t, std::pair<int, std::array<int, 2>>> edge_use;
    for (const auto& tri : surface.triangles) {
        for (int k = 0; k < 3; ++k) {
            auto& slot = edge_use[edge_key(tri[k], tri[(k + 1) % 3])];
            ++slot.first;
            slot.second = {tri[k], tri[(k + 1) % 3]};
        }
    }
    std::vector<Segment2> segs;
    for (const auto& [key, slot] : edge_use) {
        (void)key;
        if (slot.first != 1) continue;
        segs.push_back({surface.vertices[slot.second[0]].xy(), surface.vertices[slot.second[1]].xy()});
    }
    SortReport rep;
    auto chains = sort_segments(segs, 1e-6, &rep);
    if (rep.open_chains > 0)
        throw std::runtime_error("surface_offset: open non-planar boundary");
    Region region;
    for (auto& c : chains)
        if (c.closed) region.push_back(std::move(c));
    identify_holes(region);
    return region;
}

std::vector<Segment2> surface_internal_edges(const OffsetSurface& surface) {
    std::unordered_map<std::uint64_t, std::pair<int, std::array<int, 2>>> edge_use;
    for (const auto& tri : surface.triangles) {
        for (int k = 0; k < 3; ++k) {
            auto& slot = edge_use[edge_key(tri[k], tri[(k + 1) % 3])];
            ++slot.first;
            slot.second = {tri[k], tri[(k + 1) % 3]};
        }
    }
    std::vector<std::pair<std::uint64_t, std::array<int, 2>>> ordered;
    for (const auto& [key, slot] : edge_use)
        if (slot.first >= 2) ordered.emplace_back(key, slot.second);
    std::sort(ordered.begin(), ordered.end());
    std::vector<Segment2> segs;
    segs.reserve(ordered.size());
    for (const auto& [key, e] : ordered) {
        (void)key;
        segs.push_back({surface.vertices[e[0]].xy(), surface.vertices[e[1]].xy()});
    }
    return segs;
}

void write_surface_obj(const OffsetSurface& surface, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("surface_offset: cannot write " + path);
    f.precision(12);
    for (const Vec3& v : surface.vertices) f << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& t : surface.triangles)
        f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

} // namespace npslice
