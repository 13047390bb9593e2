#pragma once

#include <string>
#include <utility>
#include <vector>

#include "npslice/chains.hpp"
#include "npslice/config.hpp"
#include "npslice/surface_offset.hpp"
#include "npslice/toolpath.hpp"

namespace npslice {

/// Barycentric coordinates (s, t) of p with respect to the triangle:
/// p = v0 + s*(v1-v0) + t*(v2-v0).
std::pair<double, double> barycentric(const Vec2& p, const Vec2& v0, const Vec2& v1, const Vec2& v2);

/// Relaxed inclusion test; eps rescues points sitting exactly on edges.
bool point_in_triangle(const Vec2& p, const Vec2& v0, const Vec2& v1, const Vec2& v2,
                       double eps = 1e-3);

/// Point-location structure over one offset surface's xy footprint.
class SurfaceLocator {
public:
    explicit SurfaceLocator(const OffsetSurface& surface);
    const OffsetSurface& surface() const { return *surface_; }
    /// Ascending indices of triangles whose relaxed footprint contains p.
    std::vector<int> containing_triangles(const Vec2& p) const;
    /// Internal shared edges, pre-bucketed for subdivision queries.
    std::vector<int> edges_near(const Box2& box) const;
    const std::vector<Segment2>& internal_edges() const { return internal_edges_; }

private:
    const OffsetSurface* surface_;
    Box2 world_;
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> tri_cells_;
    std::vector<std::vector<int>> edge_cells_;
    std::vector<Segment2> internal_edges_;
};

/// Lifts a 2D point vertically onto the surface. The z comes from the
/// lowest-index containing triangle's plane; the tool orientation averages
/// the facet normals of every containing triangle. Throws "projection miss"
/// when no triangle contains the point.
ToolpathPoint project_point(const Vec2& p, const SurfaceLocator& locator);

/// Adds a point wherever a path segment properly crosses an internal shared
/// edge, ordered along the segment, duplicates merged.
std::vector<Vec2> subdivide_at_shared_edges(const std::vector<Vec2>& path,
                                            const SurfaceLocator& locator);

/// Conformal wall loops on one offset surface, outer to inner.
std::vector<Toolpath> nonplanar_walls(const Region& patch_boundary, const SurfaceLocator& locator,
                                      const SlicerConfig& cfg, std::vector<std::string>* warnings);

/// Conformal serpentine infill on one offset surface; sub-polygons joined in
/// adjacency order with lifted travel hops.
std::vector<Toolpath> nonplanar_infill(const Region& patch_boundary, const SurfaceLocator& locator,
                                       const SlicerConfig& cfg, int layer_index,
                                       std::vector<std::string>* warnings);

/// Walls plus infill for every usable offset surface of one patch, deepest
/// surface first. Layer indices continue the planar numbering so the hatch
/// angle keeps alternating.
std::vector<Toolpath> generate_nonplanar_layers(const std::vector<OffsetSurface>& surfaces,
                                                int patch_id, const SlicerConfig& cfg,
                                                int planar_layer_count,
                                                std::vector<std::string>* warnings);

} // namespace npslice
