#pragma once

#include <string>
#include <vector>

#include "npslice/config.hpp"
#include "npslice/geometry.hpp"
#include "npslice/mesh.hpp"
#include "npslice/toolpath.hpp"

namespace npslice {

struct PointSet {
    std::vector<Vec3> points;
    std::string label;
};

/// Exact nearest-neighbor structure over 3D points.
class KdTree3 {
public:
    explicit KdTree3(const std::vector<Vec3>& points);
    /// Squared distance to the nearest stored point.
    double nearest_dist2(const Vec3& q) const;

private:
    struct Node {
        Vec3 p;
        int axis;
        int left = -1, right = -1;
    };
    int build(std::vector<int>& idx, int lo, int hi, int depth);
    void search(int node, const Vec3& q, double& best) const;
    std::vector<Node> nodes_;
    std::vector<Vec3> pts_;
    int root_ = -1;
};

/// Symmetric Chamfer distance: mean nearest-neighbor distance from P to Q
/// plus mean from Q to P.
double chamfer(const PointSet& p, const PointSet& q);
/// Quadratic reference implementation used to validate the k-d tree path.
double chamfer_brute(const PointSet& p, const PointSet& q);

constexpr int kDefaultGridX = 350;
constexpr int kDefaultGridY = 356;

/// Vertical-ray samples of the mesh top surface over a rectangular region.
/// Grid points whose ray misses the mesh are skipped; throws on zero hits.
PointSet sample_mesh_surface(const TriangleMesh& mesh, const Box2& region, int nx = kDefaultGridX,
                             int ny = kDefaultGridY);

/// Top surface of the deposited material under a rectangular-capped bead
/// model: each extruding segment contributes (centerline z at the closest
/// point) + layer_height/2 wherever the xy distance to the centerline is at
/// most extrusion_width/2; the surface takes the maximum.
PointSet reconstruct_deposited_surface(const std::vector<Toolpath>& paths, const SlicerConfig& cfg,
                                       const Box2& region, int nx = kDefaultGridX,
                                       int ny = kDefaultGridY);

struct AccuracyResult {
    double cd_planar_mm = 0.0;
    double cd_nonplanar_mm = 0.0;
};

/// Chamfer distances of the planar-only and combined toolpath
/// reconstructions against the source mesh over the comparison region.
AccuracyResult accuracy_report(const TriangleMesh& mesh, const std::vector<Toolpath>& planar_paths,
                               const std::vector<Toolpath>& nonplanar_paths, const SlicerConfig& cfg,
                               const Box2& region, int nx = kDefaultGridX, int ny = kDefaultGridY);

} // namespace npslice
