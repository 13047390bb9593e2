#pragma once

#include "npslice/chains.hpp"

namespace npslice {

/// Inward offset of a region by d > 0 (holes move outward into the solid).
/// The result is the exact distance-d level set of the boundary: straight
/// stretches stay parallel at distance d, convex corners stay sharp mitered
/// joins, reflex corners become fine polygonal arcs. Components may split or
/// vanish; output chains never self-intersect and are pairwise disjoint.
Region ss_offset(const Region& region, double d);

} // namespace npslice
