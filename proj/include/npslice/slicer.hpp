#pragma once

#include <string>
#include <vector>

#include "npslice/chains.hpp"
#include "npslice/config.hpp"
#include "npslice/mesh.hpp"

namespace npslice {

/// One planar layer. `z` is the nominal top-of-bead plane (index+1 times the
/// layer height); cross-section geometry is taken half a layer below it, at
/// the bead centerline.
struct Layer {
    int index = 0;
    double z = 0.0;
    Region chains;
    std::vector<PolygonChain> walls;            // print order, outer first
    std::vector<std::vector<Vec2>> infill;      // polylines
    std::vector<std::vector<bool>> infill_ext;  // per-point extruding flag (false on hop points)
};

inline double slice_plane_z(const SlicerConfig& cfg, int layer_index) {
    return (layer_index + 1) * cfg.layer_height - 0.5 * cfg.layer_height;
}

/// Intersects every triangle with the horizontal plane at z. Triangles
/// coplanar with the plane contribute the outer perimeter of the coplanar
/// set; single-vertex touches contribute nothing.
std::vector<Segment2> slice_plane(const TriangleMesh& mesh, double z);

/// slice_plane + chain assembly + hole identification.
Region section_chains(const TriangleMesh& mesh, double z, SortReport* report = nullptr);

/// Cross-section of the mesh minus the cross-sections of every non-planar
/// space at the same height.
Region planar_only_section(const TriangleMesh& mesh, const std::vector<TriangleMesh>& spaces,
                           double z);

/// Evenly spaced layers over the mesh height. Layers whose section is empty
/// are retained empty.
std::vector<Layer> generate_layers(const TriangleMesh& mesh, const std::vector<TriangleMesh>& spaces,
                                   const SlicerConfig& cfg, std::vector<std::string>* warnings = nullptr);

} // namespace npslice
