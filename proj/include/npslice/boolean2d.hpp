#pragma once

#include <vector>

#include "npslice/chains.hpp"

namespace npslice {

enum class BoolOp { Union, Intersection, Difference };

/// Even-odd boolean of two chain-set regions. Output chains are closed,
/// solids counterclockwise, holes clockwise, nesting flags set.
Region region_boolean(const Region& a, const Region& b, BoolOp op);

/// Area of the overlap of two regions (used by the no-overlap audits).
double region_intersection_area(const Region& a, const Region& b);

namespace detail {

/// A directed segment tagged with an arbitrary id, chained into loops while
/// preserving direction. Interior-left input produces CCW solids.
struct DirectedSegment {
    Vec2 a;
    Vec2 b;
};

/// Chains directed segments into closed loops by endpoint matching; at
/// junctions the continuation with the sharpest left turn is taken. Segments
/// that fail to close are dropped (their count is returned via open_count).
std::vector<PolygonChain> chain_directed(const std::vector<DirectedSegment>& segs, double tol,
                                         int* open_count = nullptr);

/// Splits every segment at its intersections with all others (proper
/// crossings, endpoint touches, collinear overlaps). Split points are shared
/// bit-exactly between the two segments of a pair.
std::vector<std::vector<Vec2>> split_all(const std::vector<Segment2>& segs);

} // namespace detail

} // namespace npslice
