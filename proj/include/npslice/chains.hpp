#pragma once

#include <string>
#include <vector>

#include "npslice/geometry.hpp"

namespace npslice {

/// Ordered 2D vertex chain. Closed chains store each vertex once; the edge
/// from back() to front() is implicit.
struct PolygonChain {
    std::vector<Vec2> pts;
    bool closed = true;
    bool is_hole = false;
    int parent = -1;       // index of the immediate containing chain, -1 at top level
    double plane_z = 0.0;  // slicing plane height for planar cross-sections

    double signed_area() const;
    bool is_ccw() const { return signed_area() > 0; }
    void reverse();
    /// Rotates a closed chain so it starts at the lexicographically smallest vertex.
    void canonicalize_start();
    Box2 bbox() const;
};

/// A set of closed chains interpreted with the even-odd fill rule.
using Region = std::vector<PolygonChain>;

struct SortReport {
    int open_chains = 0;
    int dropped_degenerate = 0;
};

/// Assembles unordered segments into polygon chains by endpoint matching.
/// Closed chains are normalized to counterclockwise winding and canonical
/// start; chains that fail to close are emitted open and counted in the
/// report. Output order is independent of input order.
std::vector<PolygonChain> sort_segments(const std::vector<Segment2>& segments, double tol = 1e-6,
                                        SortReport* report = nullptr);

/// Computes hole nesting for closed chains with the odd rule and orients
/// solids counterclockwise, holes opposite their parent. Throws on chains
/// that cross each other.
void identify_holes(std::vector<PolygonChain>& chains);

/// Even-odd point membership over a chain set.
bool point_in_region(const Region& region, const Vec2& p);
bool point_in_chain(const PolygonChain& chain, const Vec2& p);

/// Net material area: sum of signed areas after hole orientation.
double region_area(const Region& region);

Box2 region_bbox(const Region& region);

/// Minimum distance from a point to any chain edge.
double dist_to_region_boundary(const Region& region, const Vec2& p);

} // namespace npslice
