#include "npslice/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "npslice/boolean2d.hpp"

namespace npslice {

namespace {

constexpr double kOnPlane = 1e-9;

// Signed height above the plane with the on-plane perturbation: vertices
// within 1e-9 of the plane count as above it, removing single-point touches
// deterministically.
double side_of(double vz, double z) {
    double s = vz - z;
    if (std::abs(s) < kOnPlane) return kOnPlane;
    return s;
}

} // namespace

std::vector<Segment2> slice_plane(const TriangleMesh& mesh, double z) {
    std::vector<Segment2> out;
    std::vector<int> coplanar;

    // One intersection per mesh edge, computed in canonical vertex order so
    // the two triangles sharing the edge get the bit-identical point.
    std::unordered_map<std::uint64_t, Vec2> edge_cache;
    auto edge_point = [&](int va, int vb) {
        std::uint64_t key = edge_key(va, vb);
        auto it = edge_cache.find(key);
        if (it != edge_cache.end()) return it->second;
        int lo = std::min(va, vb), hi = std::max(va, vb);
        const Vec3& p0 = mesh.vertices[lo];
        const Vec3& p1 = mesh.vertices[hi];
        double s0 = side_of(p0.z, z);
        double s1 = side_of(p1.z, z);
        double t = s0 / (s0 - s1);
        Vec2 p{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
        edge_cache.emplace(key, p);
        return p;
    };

    std::vector<char> is_coplanar(mesh.triangles.size(), 0);
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        bool all_on_plane = true;
        for (int k = 0; k < 3; ++k)
            if (std::abs(mesh.vertices[tri[k]].z - z) >= kOnPlane) all_on_plane = false;
        if (all_on_plane) {
            is_coplanar[t] = 1;
            coplanar.push_back(static_cast<int>(t));
        }
    }

    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (is_coplanar[t]) continue;
        const auto& tri = mesh.triangles[t];
        double s[3];
        int on_plane[3];
        for (int k = 0; k < 3; ++k) {
            s[k] = side_of(mesh.vertices[tri[k]].z, z);
            on_plane[k] = std::abs(mesh.vertices[tri[k]].z - z) < kOnPlane ? 1 : 0;
        }
        bool above[3];
        for (int k = 0; k < 3; ++k) above[k] = s[k] > 0;
        if (above[0] == above[1] && above[1] == above[2]) continue;

        // A triangle resting on the plane along one edge would re-emit an
        // edge the coplanar-perimeter rule already owns; skip it when a
        // coplanar facet shares that edge.
        if (on_plane[0] + on_plane[1] + on_plane[2] == 2) {
            int k0 = !on_plane[0] ? 1 : (!on_plane[1] ? 2 : 0);
            auto it = mesh.edge_adjacency.find(edge_key(tri[k0], tri[(k0 + 1) % 3]));
            bool owned = false;
            if (it != mesh.edge_adjacency.end())
                for (int nb : it->second) owned = owned || is_coplanar[nb];
            if (owned) continue;
        }

        Vec2 hits[2];
        int nh = 0;
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (above[k] != above[(k + 1) % 3]) hits[nh++] = edge_point(a, b);
        }
        if (nh == 2 && (hits[0] - hits[1]).norm() > 1e-12) out.push_back({hits[0], hits[1]});
    }

    if (!coplanar.empty()) {
        // The section of coplanar facets is the perimeter of their union:
        // edges used exactly once within the coplanar set.
        std::unordered_map<std::uint64_t, std::pair<int, std::array<int, 2>>> count;
        for (int t : coplanar) {
            const auto& tri = mesh.triangles[t];
            for (int k = 0; k < 3; ++k) {
                int a = tri[k], b = tri[(k + 1) % 3];
                auto& slot = count[edge_key(a, b)];
                ++slot.first;
                slot.second = {a, b};
            }
        }
        for (const auto& [key, slot] : count) {
            (void)key;
            if (slot.first != 1) continue;
            const Vec3& a = mesh.vertices[slot.second[0]];
            const Vec3& b = mesh.vertices[slot.second[1]];
            out.push_back({{a.x, a.y}, {b.x, b.y}});
        }
    }
    return out;
}

Region section_chains(const TriangleMesh& mesh, double z, SortReport* report) {
    SortReport rep;
    auto chains = sort_segments(slice_plane(mesh, z), 1e-6, &rep);
    Region closed;
    for (auto& c : chains)
        if (c.closed) closed.push_back(std::move(c));
    identify_holes(closed);
    for (auto& c : closed) c.plane_z = z;
    if (report) *report = rep;
    return closed;
}

Region planar_only_section(const TriangleMesh& mesh, const std::vector<TriangleMesh>& spaces,
                           double z) {
    Region section = section_chains(mesh, z);
    if (section.empty()) return section;
    for (const TriangleMesh& space : spaces) {
        Box3 bb = space.bbox();
        if (!bb.valid() || z < bb.lo.z - 1e-9 || z > bb.hi.z + 1e-9) continue;
        Region cut = section_chains(space, z);
        if (cut.empty()) continue;
        section = region_boolean(section, cut, BoolOp::Difference);
        for (auto& c : section) c.plane_z = z;
        if (section.empty()) break;
    }
    return section;
}

std::vector<Layer> generate_layers(const TriangleMesh& mesh, const std::vector<TriangleMesh>& spaces,
                                   const SlicerConfig& cfg, std::vector<std::string>* warnings) {
    std::vector<Layer> layers;
    Box3 bb = mesh.bbox();
    if (!bb.valid()) return layers;
    double z_max = bb.hi.z;
    int count = static_cast<int>(std::floor(z_max / cfg.layer_height + 1e-9));
    if (count <= 0) {
        if (warnings) warnings->push_back("planar_slice: mesh shorter than one layer height, no layers");
        return layers;
    }
    double leftover = z_max - count * cfg.layer_height;
    if (leftover > 1e-6 && warnings)
        warnings->push_back("planar_slice: top " + std::to_string(leftover) + " mm left unsliced");

    layers.reserve(count);
    for (int i = 0; i < count; ++i) {
        Layer layer;
        layer.index = i;
        layer.z = (i + 1) * cfg.layer_height;
        layer.chains = planar_only_section(mesh, spaces, slice_plane_z(cfg, i));
        layers.push_back(std::move(layer));
    }
    return layers;
}

} // namespace npslice
