#pragma once

#include <string>
#include <vector>

#include "npslice/chains.hpp"
#include "npslice/config.hpp"
#include "npslice/mesh.hpp"

namespace npslice {

/// Surface inclination below which curved layers beat planar ones, in
/// degrees, for the given bead geometry.
double threshold_angle(double layer_height, double extrusion_width);

/// True iff the facet faces upward within the threshold angle of vertical.
bool classify_triangle(const Vec3& facet_normal, double threshold_angle_deg);

/// 2D point-location grid over triangle footprints; shared by the vertical
/// ray and box queries.
class TriangleGrid {
public:
    TriangleGrid() = default;
    explicit TriangleGrid(const TriangleMesh& mesh);
    /// Triangle indices whose xy bounding box may cover the query box.
    std::vector<int> query(const Box2& box) const;
    std::vector<int> query(const Vec2& p) const;

private:
    const TriangleMesh* mesh_ = nullptr;
    Box2 world_;
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;
};

constexpr double kRayEpsilon = 1e-4;  // mm lift of the ray origin off its own triangle

/// True iff a vertical ray cast upward from the vertex hits any mesh
/// triangle above it.
bool occlusion_test(const Vec3& vertex, const TriangleMesh& mesh, const TriangleGrid& grid);
bool occlusion_test(const Vec3& vertex, const TriangleMesh& mesh);

/// True iff the extruder bounding box (xy-centered on the nozzle tip,
/// extending upward) overlaps any mesh triangle outside the excluded set.
bool collision_test(const Vec3& vertex, const TriangleMesh& mesh, const Vec3& box_dims,
                    const TriangleGrid& grid, const std::vector<char>& exclude_triangle);
bool collision_test(const Vec3& vertex, const TriangleMesh& mesh, const Vec3& box_dims);

/// Separating-axis triangle vs axis-aligned-box overlap.
bool triangle_box_overlap(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& box_lo,
                          const Vec3& box_hi);

/// Edge-connected set of upward shallow triangles hosting curved layers.
struct SurfacePatch {
    int id = 0;
    std::vector<int> triangles;  // ascending mesh triangle indices
};

struct PatchReport {
    int candidate_triangles = 0;
    int occlusion_discarded = 0;
    int collision_discarded = 0;
    int small_patches_discarded = 0;
};

/// Full detection stage: angle test, per-vertex ray and box filters,
/// edge-connected grouping. Patches with fewer than three triangles are
/// discarded. Empty result means the object prints planar-only.
std::vector<SurfacePatch> extract_nonplanar_surface(const TriangleMesh& mesh, const SlicerConfig& cfg,
                                                    PatchReport* report = nullptr);

/// Boundary of the patch in xy projection: edges with exactly one incident
/// patch triangle assembled into closed chains, holes marked. Throws when
/// the boundary does not close.
Region extract_boundary(const TriangleMesh& mesh, const SurfacePatch& patch);

} // namespace npslice
