#pragma once

#include <vector>

#include "npslice/chains.hpp"
#include "npslice/config.hpp"

namespace npslice {

/// Polygon whose boundary meets every line perpendicular to the sweep
/// direction in at most two points. Produced by the partition-line
/// decomposition; vertices are in original (unrotated) coordinates.
struct MonotonePolygon {
    std::vector<Vec2> pts;          // CCW
    Vec2 sweep_dir{0, 1};
    double sweep_angle_deg = 0.0;   // pass-line angle; sweep_dir is its left normal
    int band = 0;
};

struct InfillPath {
    std::vector<Vec2> polyline;
    double spacing = 0.0;
    double angle_deg = 0.0;
};

/// Hatch angle alternates 90 degrees between consecutive layers.
inline double infill_angle(int layer_index, double base_angle_deg) {
    return base_angle_deg + 90.0 * (((layer_index % 2) + 2) % 2);
}

/// True iff no internal angle exceeds 180 degrees; collinear vertices are
/// tolerated.
bool is_convex(const PolygonChain& chain);

/// Partitions a region (holes allowed) into sweep-monotone sub-polygons by
/// cutting along lines perpendicular to the sweep direction through every
/// split/merge event vertex. Union of outputs equals the input region.
std::vector<MonotonePolygon> decompose_monotone(const Region& region, double sweep_angle_deg);

/// Orders sub-polygons by depth-first traversal of the adjacency graph
/// (edges where two polygons share at least two partition-line vertices).
std::vector<int> order_subpolygons(const std::vector<MonotonePolygon>& subpolys);

/// Serpentine fill of one monotone polygon: parallel passes at perpendicular
/// spacing d starting one spacing above the low side, alternating direction,
/// consecutive passes connected along the boundary.
InfillPath zigzag(const MonotonePolygon& poly, double d, double angle_deg);

struct WallSet {
    std::vector<Region> walls;  // walls[k] is the ring at inset (0.5+k)*width
    Region infill_boundary;     // inset (0.5+wall_count)*width; not printed
};

/// Wall rings by straight-skeleton-style insetting; rings that vanish are
/// omitted (their slot is dropped, order stays outer to inner).
WallSet generate_walls(const Region& layer_chains, const SlicerConfig& cfg);

} // namespace npslice
