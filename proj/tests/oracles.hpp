#pragma once

#include <optional>
#include <vector>

#include "npslice/chains.hpp"
#include "npslice/mesh.hpp"

namespace npslice::oracles {

/// Brute-force vertical lift onto a triangle soup: max plane z over all
/// triangles whose footprint covers p (inclusive). Empty when none does.
std::optional<double> lift_z(const std::vector<Vec3>& vertices,
                             const std::vector<std::array<int, 3>>& triangles, const Vec2& p);

/// Vertical distance from a 3D point to the surface, infinity off-footprint.
double vertical_surface_distance(const std::vector<Vec3>& vertices,
                                 const std::vector<std::array<int, 3>>& triangles, const Vec3& p);

/// Grid-bucketed variant of vertical_surface_distance for large sweeps.
class LiftGrid {
public:
    LiftGrid(const std::vector<Vec3>& vertices, const std::vector<std::array<int, 3>>& triangles);
    double vertical_distance(const Vec3& p) const;

private:
    const std::vector<Vec3>& verts_;
    const std::vector<std::array<int, 3>>& tris_;
    Box2 world_;
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;
};

/// Moller-Trumbore ray/triangle oracle for upward rays.
bool ray_up_hits_mesh(const Vec3& origin, const TriangleMesh& mesh);

/// Subpixel boundary samples of {p : p inside region and dist(p, boundary)
/// >= d}, marched on a uniform grid.
std::vector<Vec2> distance_field_offset_boundary(const Region& region, double d, double grid = 0.01);

/// Symmetric Hausdorff distance between a sampled chain set and a point set.
double hausdorff_chains_points(const Region& chains, const std::vector<Vec2>& points,
                               double sample_step = 0.005);

/// Region area by even-odd rasterization on a uniform grid.
double rasterized_area(const Region& region, double grid = 0.05);

/// Overlap area of two regions by rasterization.
double rasterized_intersection_area(const Region& a, const Region& b, double grid = 0.05);

/// Number of boundary crossings of the horizontal line y with the polygon.
int crossings_at(const std::vector<Vec2>& poly, double y);

/// True iff 1000 random horizontal probes each cross the boundary at most
/// twice (the monotone property).
bool monotone_by_probes(const std::vector<Vec2>& poly, unsigned seed, int probes = 1000);

} // namespace npslice::oracles
