#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "npslice/geometry.hpp"

namespace npslice {

/// Undirected edge key: packed pair of vertex indices, smaller first.
inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

using EdgeAdjacency = std::unordered_map<std::uint64_t, std::vector<int>>;

struct WeldReport {
    int dropped_degenerate = 0;
    int merged_vertices = 0;
};

/// Indexed triangle mesh with facet normals and edge adjacency.
/// Immutable after construction; units are millimeters.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> facet_normals;
    EdgeAdjacency edge_adjacency;
    WeldReport weld_report;

    const Vec3& tri_vertex(int tri, int corner) const { return vertices[triangles[tri][corner]]; }
    Vec3 geometric_normal(int tri) const;
    Box3 bbox() const;
    double volume() const;
    int boundary_edge_count() const;
    bool is_watertight() const;
};

struct RawTriangle {
    std::array<Vec3, 3> v;
    Vec3 normal;  // as stored in the file; zero when absent
};

constexpr double kWeldTolDefault = 1e-6;

/// Loads an STL file, auto-detecting binary vs ASCII, welds duplicate
/// vertices and validates facet normals against the winding.
TriangleMesh load_stl(const std::string& path, double weld_tol = kWeldTolDefault);

/// Builds an indexed mesh from triangle soup, merging vertices within tol.
/// Triangles that collapse to fewer than three distinct vertices are dropped
/// and counted in the report.
TriangleMesh weld_vertices(const std::vector<RawTriangle>& raw, double tol);

/// Recomputes the incidence map from scratch. An edge with exactly one
/// incident triangle is a boundary edge; more than two is recorded, not
/// rejected.
EdgeAdjacency build_edge_adjacency(const TriangleMesh& mesh);

void write_binary_stl(const TriangleMesh& mesh, const std::string& path);
void write_ascii_stl(const TriangleMesh& mesh, const std::string& path, const std::string& name = "mesh");
void write_obj(const TriangleMesh& mesh, const std::string& path);

} // namespace npslice
