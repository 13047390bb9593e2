#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "npslice/chains.hpp"
#include "npslice/config.hpp"
#include "npslice/mesh.hpp"
#include "npslice/nonplanar.hpp"

namespace npslice {

/// Constant-distance offset copy of a surface patch. Connectivity matches
/// the source; vertices are locally indexed.
struct OffsetSurface {
    int patch_id = 0;
    double offset_distance = 0.0;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> vertex_normals;  // source-patch averaged normals, per local vertex
    std::vector<Vec3> facet_normals;   // recomputed from the offset geometry
    std::vector<int> source_vertex;    // local index -> mesh vertex index
    bool self_intersecting = false;

    Box2 footprint_bbox() const;
    double max_z() const;
};

/// Averaged facet normals at each vertex of the patch, unit length.
/// Throws when opposing facets cancel to a zero sum, naming the vertex.
std::unordered_map<int, Vec3> vertex_normals(const TriangleMesh& mesh, const SurfacePatch& patch);

/// Moves every patch vertex by d along its averaged normal (negative d goes
/// into the object). Throws "offset limit reached" when a triangle
/// degenerates or the offset surface self-intersects.
OffsetSurface offset_patch(const TriangleMesh& mesh, const SurfacePatch& patch, double d);

/// Re-offsets an already offset surface using normals recomputed from its
/// own geometry.
OffsetSurface offset_again(const OffsetSurface& surface, double d);

/// Closed slab between the original patch (normals up) and the bottom
/// offset (normals flipped), stitched with side quads along the boundary.
TriangleMesh build_nonplanar_space(const TriangleMesh& mesh, const SurfacePatch& patch,
                                   const OffsetSurface& bottom);

/// Offset surfaces for the curved layers, deepest first (print order), at
/// depths -(k + 0.5) * layer_height. Failed offsets are skipped with a
/// warning, reducing the effective layer count.
std::vector<OffsetSurface> interior_layer_surfaces(const TriangleMesh& mesh, const SurfacePatch& patch,
                                                   const SlicerConfig& cfg,
                                                   std::vector<std::string>* warnings = nullptr);

/// Layer surfaces plus the enclosing space with a depth that matches the
/// number of usable surfaces. Empty surfaces means the patch reverts to
/// planar treatment.
struct PatchStack {
    std::vector<OffsetSurface> surfaces;  // deepest first
    TriangleMesh space;
    int effective_layers = 0;
};

PatchStack build_patch_stack(const TriangleMesh& mesh, const SurfacePatch& patch,
                             const SlicerConfig& cfg, std::vector<std::string>* warnings = nullptr);

/// Boundary edges (used once) of the offset surface, projected to xy and
/// assembled into nested chains.
Region surface_boundary(const OffsetSurface& surface);

/// Internal shared edges (used twice or more), projected to xy.
std::vector<Segment2> surface_internal_edges(const OffsetSurface& surface);

/// Debug dump as Wavefront OBJ.
void write_surface_obj(const OffsetSurface& surface, const std::string& path);

} // namespace npslice
