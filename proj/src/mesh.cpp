#include "npslice/mesh.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace npslice {

Vec3 TriangleMesh::geometric_normal(int tri) const {
    const Vec3& a = tri_vertex(tri, 0);
    const Vec3& b = tri_vertex(tri, 1);
    const Vec3& c = tri_vertex(tri, 2);
    return (b - a).cross(c - a).normalized();
}

Box3 TriangleMesh::bbox() const {
    Box3 b;
    for (const Vec3& v : vertices) b.expand(v);
    return b;
}

double TriangleMesh::volume() const {
    double v6 = 0.0;
    for (const auto& t : triangles) {
        const Vec3& a = vertices[t[0]];
        const Vec3& b = vertices[t[1]];
        const Vec3& c = vertices[t[2]];
        v6 += a.dot(b.cross(c));
    }
    return v6 / 6.0;
}

int TriangleMesh::boundary_edge_count() const {
    int n = 0;
    for (const auto& [key, tris] : edge_adjacency)
        if (tris.size() == 1) ++n;
    return n;
}

bool TriangleMesh::is_watertight() const {
    for (const auto& [key, tris] : edge_adjacency)
        if (tris.size() != 2) return false;
    return !triangles.empty();
}

namespace {

struct VertexWelder {
    double tol;
    double cell;
    std::unordered_multimap<std::uint64_t, int> grid;
    std::vector<Vec3>* verts;

    VertexWelder(double t, std::vector<Vec3>* v)
        : tol(t), cell(std::max(t, 1e-12)), verts(v) {}

    std::uint64_t key(const Vec3& p, int dx, int dy, int dz) const {
        auto q = [this](double v) { return static_cast<std::int64_t>(std::llround(v / cell)); };
        std::uint64_t hx = static_cast<std::uint64_t>(q(p.x + dx * cell)) * 0x9E3779B97F4A7C15ull;
        std::uint64_t hy = static_cast<std::uint64_t>(q(p.y + dy * cell)) * 0xC2B2AE3D27D4EB4Full;
        std::uint64_t hz = static_cast<std::uint64_t>(q(p.z + dz * cell)) * 0x27D4EB2F165667C5ull;
        return hx ^ hy ^ hz;
    }

    int add(const Vec3& p, int* merged) {
        if (tol == 0.0) {
            auto range = grid.equal_range(key(p, 0, 0, 0));
            for (auto it = range.first; it != range.second; ++it)
                if ((*verts)[it->second] == p) {
                    ++*merged;
                    return it->second;
                }
        } else {
            int best = -1;
            double best_d = tol;
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dz = -1; dz <= 1; ++dz) {
                        auto range = grid.equal_range(key(p, dx, dy, dz));
                        for (auto it = range.first; it != range.second; ++it) {
                            double d = ((*verts)[it->second] - p).norm();
                            if (d <= best_d && (best == -1 || d < best_d || it->second < best)) {
                                best_d = d;
                                best = it->second;
                            }
                        }
                    }
            if (best >= 0) {
                ++*merged;
                return best;
            }
        }
        int idx = static_cast<int>(verts->size());
        verts->push_back(p);
        grid.emplace(key(p, 0, 0, 0), idx);
        return idx;
    }
};

Vec3 validated_normal(const RawTriangle& raw, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 geom = (b - a).cross(c - a).normalized();
    double stored_len = raw.normal.norm();
    if (stored_len < 0.5) return geom;
    Vec3 stored = raw.normal / stored_len;
    if (stored.dot(geom) <= 0.0) return geom;  // disagrees with winding by more than 90 degrees
    return stored;
}

} // namespace

TriangleMesh weld_vertices(const std::vector<RawTriangle>& raw, double tol) {
    if (tol < 0) throw std::runtime_error("mesh_io: negative weld tolerance");
    TriangleMesh mesh;
    VertexWelder welder(tol, &mesh.vertices);
    for (const RawTriangle& rt : raw) {
        std::array<int, 3> idx;
        for (int k = 0; k < 3; ++k) idx[k] = welder.add(rt.v[k], &mesh.weld_report.merged_vertices);
        if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) {
            ++mesh.weld_report.dropped_degenerate;
            continue;
        }
        const Vec3& a = mesh.vertices[idx[0]];
        const Vec3& b = mesh.vertices[idx[1]];
        const Vec3& c = mesh.vertices[idx[2]];
        if ((b - a).cross(c - a).norm() < 2e-9) {  // zero-area sliver
            ++mesh.weld_report.dropped_degenerate;
            continue;
        }
        mesh.triangles.push_back(idx);
        mesh.facet_normals.push_back(validated_normal(rt, a, b, c));
    }
    mesh.edge_adjacency = build_edge_adjacency(mesh);
    return mesh;
}

EdgeAdjacency build_edge_adjacency(const TriangleMesh& mesh) {
    EdgeAdjacency adj;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k)
            adj[edge_key(tri[k], tri[(k + 1) % 3])].push_back(static_cast<int>(t));
    }
    return adj;
}

namespace {

std::vector<RawTriangle> parse_binary_stl(const std::string& data, const std::string& path) {
    if (data.size() < 84)
        throw std::runtime_error("mesh_io: truncated body in " + path);
    std::uint32_t count;
    std::memcpy(&count, data.data() + 80, 4);
    size_t need = 84 + static_cast<size_t>(count) * 50;
    if (data.size() < need)
        throw std::runtime_error("mesh_io: truncated body in " + path + " (declared " +
                                 std::to_string(count) + " triangles)");
    if (count == 0) throw std::runtime_error("mesh_io: zero triangles in " + path);

    std::vector<RawTriangle> out(count);
    const char* p = data.data() + 84;
    for (std::uint32_t i = 0; i < count; ++i, p += 50) {
        float f[12];
        std::memcpy(f, p, 48);
        out[i].normal = {f[0], f[1], f[2]};
        for (int k = 0; k < 3; ++k)
            out[i].v[k] = {f[3 + 3 * k], f[4 + 3 * k], f[5 + 3 * k]};
    }
    return out;
}

class AsciiStlParser {
public:
    AsciiStlParser(const std::string& data, const std::string& path)
        : in_(data), path_(path) {}

    std::vector<RawTriangle> parse() {
        expect("solid");
        skip_rest_of_line();
        std::vector<RawTriangle> out;
        while (true) {
            std::string tok = next_token();
            if (tok == "endsolid") break;
            if (tok != "facet") fail("expected 'facet' or 'endsolid', got '" + tok + "'");
            RawTriangle t;
            expect("normal");
            t.normal = read_vec3();
            expect("outer");
            expect("loop");
            for (int k = 0; k < 3; ++k) {
                expect("vertex");
                t.v[k] = read_vec3();
            }
            expect("endloop");
            expect("endfacet");
            out.push_back(t);
        }
        if (out.empty()) throw std::runtime_error("mesh_io: zero triangles in " + path_);
        return out;
    }

private:
    std::string next_token() {
        std::string tok;
        char c;
        while (in_.get(c)) {
            if (c == '\n') ++line_;
            if (!std::isspace(static_cast<unsigned char>(c))) {
                tok.push_back(c);
                break;
            }
        }
        token_line_ = line_;
        while (in_.get(c)) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n') ++line_;
                break;
            }
            tok.push_back(c);
        }
        return tok;
    }

    void expect(const std::string& want) {
        std::string tok = next_token();
        if (tok != want) fail("expected '" + want + "', got '" + tok + "'");
    }

    void skip_rest_of_line() {
        char c;
        while (in_.get(c)) {
            if (c == '\n') {
                ++line_;
                break;
            }
        }
    }

    Vec3 read_vec3() {
        Vec3 v;
        v.x = read_number();
        v.y = read_number();
        v.z = read_number();
        return v;
    }

    double read_number() {
        std::string tok = next_token();
        try {
            size_t used = 0;
            double d = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return d;
        } catch (const std::exception&) {
            fail("expected a number, got '" + tok + "'");
        }
        return 0;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw std::runtime_error("mesh_io: " + path_ + ":" + std::to_string(token_line_) + ": " + msg);
    }

    std::istringstream in_;
    std::string path_;
    int line_ = 1;
    int token_line_ = 1;
};

bool looks_ascii(const std::string& data) {
    size_t i = 0;
    while (i < data.size() && std::isspace(static_cast<unsigned char>(data[i]))) ++i;
    if (data.compare(i, 5, "solid") != 0) return false;
    // Binary exporters sometimes write "solid" into the 80-byte header;
    // require a facet token to call it ASCII.
    return data.find("facet") != std::string::npos;
}

} // namespace

TriangleMesh load_stl(const std::string& path, double weld_tol) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("mesh_io: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    std::vector<RawTriangle> raw;
    if (looks_ascii(data))
        raw = AsciiStlParser(data, path).parse();
    else
        raw = parse_binary_stl(data, path);
    return weld_vertices(raw, weld_tol);
}

void write_binary_stl(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("mesh_io: cannot write " + path);
    char header[80] = {};
    f.write(header, 80);
    std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
    f.write(reinterpret_cast<const char*>(&count), 4);
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        float rec[12];
        const Vec3& n = mesh.facet_normals[t];
        rec[0] = static_cast<float>(n.x);
        rec[1] = static_cast<float>(n.y);
        rec[2] = static_cast<float>(n.z);
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = mesh.tri_vertex(static_cast<int>(t), k);
            rec[3 + 3 * k] = static_cast<float>(v.x);
            rec[4 + 3 * k] = static_cast<float>(v.y);
            rec[5 + 3 * k] = static_cast<float>(v.z);
        }
        f.write(reinterpret_cast<const char*>(rec), 48);
        std::uint16_t attr = 0;
        f.write(reinterpret_cast<const char*>(&attr), 2);
    }
}

void write_ascii_stl(const TriangleMesh& mesh, const std::string& path, const std::string& name) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("mesh_io: cannot write " + path);
    f.precision(9);
    f << "solid " << name << "\n";
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Vec3& n = mesh.facet_normals[t];
        f << "  facet normal " << n.x << " " << n.y << " " << n.z << "\n";
        f << "    outer loop\n";
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = mesh.tri_vertex(static_cast<int>(t), k);
            f << "      vertex " << v.x << " " << v.y << " " << v.z << "\n";
        }
        f << "    endloop\n  endfacet\n";
    }
    f << "endsolid " << name << "\n";
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("mesh_io: cannot write " + path);
    f.precision(12);
    for (const Vec3& v : mesh.vertices) f << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& t : mesh.triangles)
        f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

} // namespace npslice
