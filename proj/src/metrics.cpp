#include "npslice/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npslice/nonplanar.hpp"

namespace npslice {

KdTree3::KdTree3(const std::vector<Vec3>& points) : pts_(points) {
    if (pts_.empty()) return;
    std::vector<int> idx(pts_.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    nodes_.reserve(pts_.size());
    root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    int axis = depth % 3;
    int mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi, [&](int a, int b) {
        const Vec3& pa = pts_[a];
        const Vec3& pb = pts_[b];
        double va = axis == 0 ? pa.x : axis == 1 ? pa.y : pa.z;
        double vb = axis == 0 ? pb.x : axis == 1 ? pb.y : pb.z;
        return va < vb;
    });
    int node = static_cast<int>(nodes_.size());
    nodes_.push_back({pts_[idx[mid]], axis, -1, -1});
    int left = build(idx, lo, mid, depth + 1);
    int right = build(idx, mid + 1, hi, depth + 1);
    nodes_[node].left = left;
    nodes_[node].right = right;
    return node;
}

void KdTree3::search(int node, const Vec3& q, double& best) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    best = std::min(best, (n.p - q).norm2());
    double delta = n.axis == 0 ? q.x - n.p.x : n.axis == 1 ? q.y - n.p.y : q.z - n.p.z;
    int near = delta < 0 ? n.left : n.right;
    int far = delta < 0 ? n.right : n.left;
    search(near, q, best);
    if (delta * delta < best) search(far, q, best);
}

double KdTree3::nearest_dist2(const Vec3& q) const {
    if (root_ < 0) throw std::runtime_error("metrics: nearest neighbor of an empty set");
    double best = std::numeric_limits<double>::max();
    search(root_, q, best);
    return best;
}

double chamfer(const PointSet& p, const PointSet& q) {
    if (p.points.empty() || q.points.empty())
        throw std::runtime_error("metrics: chamfer distance of an empty point set");
    KdTree3 tp(p.points);
    KdTree3 tq(q.points);
    double sum_pq = 0.0;
    for (const Vec3& v : p.points) sum_pq += std::sqrt(tq.nearest_dist2(v));
    double sum_qp = 0.0;
    for (const Vec3& v : q.points) sum_qp += std::sqrt(tp.nearest_dist2(v));
    return sum_pq / p.points.size() + sum_qp / q.points.size();
}

double chamfer_brute(const PointSet& p, const PointSet& q) {
    if (p.points.empty() || q.points.empty())
        throw std::runtime_error("metrics: chamfer distance of an empty point set");
    auto one_way = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double sum = 0.0;
        for (const Vec3& a : from) {
            double best = std::numeric_limits<double>::max();
            for (const Vec3& b : to) best = std::min(best, (a - b).norm2());
            sum += std::sqrt(best);
        }
        return sum / from.size();
    };
    return one_way(p.points, q.points) + one_way(q.points, p.points);
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = (lo + hi) / 2;
        return v;
    }
    double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + i * step;
    return v;
}

} // namespace

PointSet sample_mesh_surface(const TriangleMesh& mesh, const Box2& region, int nx, int ny) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("metrics: grid resolution must be positive");
    TriangleGrid grid(mesh);
    PointSet set;
    set.label = "source";
    auto xs = linspace(region.lo.x, region.hi.x, nx);
    auto ys = linspace(region.lo.y, region.hi.y, ny);
    for (double y : ys) {
        for (double x : xs) {
            double best = std::numeric_limits<double>::lowest();
            for (int t : grid.query(Vec2{x, y})) {
                Vec2 a = mesh.tri_vertex(t, 0).xy();
                Vec2 b = mesh.tri_vertex(t, 1).xy();
                Vec2 c = mesh.tri_vertex(t, 2).xy();
                Vec2 u = b - a, v = c - a, w = Vec2{x, y} - a;
                double denom = u.cross(v);
                if (std::abs(denom) < 1e-12) continue;
                double s = w.cross(v) / denom;
                double tt = u.cross(w) / denom;
                constexpr double eps = 1e-9;
                if (s < -eps || tt < -eps || s + tt > 1 + eps) continue;
                double z = mesh.tri_vertex(t, 0).z + s * (mesh.tri_vertex(t, 1).z - mesh.tri_vertex(t, 0).z) +
                           tt * (mesh.tri_vertex(t, 2).z - mesh.tri_vertex(t, 0).z);
                best = std::max(best, z);
            }
            if (best > std::numeric_limits<double>::lowest())
                set.points.push_back({x, y, best});
        }
    }
    if (set.points.empty()) throw std::runtime_error("metrics: surface sampling produced zero hits");
    return set;
}

PointSet reconstruct_deposited_surface(const std::vector<Toolpath>& paths, const SlicerConfig& cfg,
                                       const Box2& region, int nx, int ny) {
    struct Seg {
        Vec3 a, b;
    };
    std::vector<Seg> segs;
    for (const Toolpath& tp : paths) {
        for (size_t i = 0; i + 1 < tp.points.size(); ++i) {
            if (!tp.points[i + 1].extruding) continue;
            segs.push_back({tp.points[i].position, tp.points[i + 1].position});
        }
    }
    if (segs.empty()) throw std::runtime_error("metrics: no extruding segments to reconstruct");

    double radius = cfg.extrusion_width / 2;
    double half_h = cfg.layer_height / 2;

    // Bucket segments on a coarse xy grid padded by the bead radius.
    Box2 world = region;
    for (const Seg& s : segs) {
        world.expand(s.a.xy());
        world.expand(s.b.xy());
    }
    double cell = std::max(1.0, 4 * radius);
    int gx = std::max(1, static_cast<int>(std::ceil(world.size().x / cell)));
    int gy = std::max(1, static_cast<int>(std::ceil(world.size().y / cell)));
    std::vector<std::vector<int>> buckets(static_cast<size_t>(gx) * gy);
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
    for (size_t i = 0; i < segs.size(); ++i) {
        Box2 bb;
        bb.expand(segs[i].a.xy());
        bb.expand(segs[i].b.xy());
        int x0 = clampi(static_cast<int>((bb.lo.x - radius - world.lo.x) / cell), gx);
        int x1 = clampi(static_cast<int>((bb.hi.x + radius - world.lo.x) / cell), gx);
        int y0 = clampi(static_cast<int>((bb.lo.y - radius - world.lo.y) / cell), gy);
        int y1 = clampi(static_cast<int>((bb.hi.y + radius - world.lo.y) / cell), gy);
        for (int cx = x0; cx <= x1; ++cx)
            for (int cy = y0; cy <= y1; ++cy)
                buckets[static_cast<size_t>(cy) * gx + cx].push_back(static_cast<int>(i));
    }

    PointSet set;
    set.label = "reconstruction";
    auto xs = linspace(region.lo.x, region.hi.x, nx);
    auto ys = linspace(region.lo.y, region.hi.y, ny);
    for (double y : ys) {
        for (double x : xs) {
            Vec2 p{x, y};
            int cx = clampi(static_cast<int>((x - world.lo.x) / cell), gx);
            int cy = clampi(static_cast<int>((y - world.lo.y) / cell), gy);
            double top = std::numeric_limits<double>::lowest();
            for (int i : buckets[static_cast<size_t>(cy) * gx + cx]) {
                const Seg& s = segs[i];
                Vec2 a = s.a.xy(), b = s.b.xy();
                Vec2 d = b - a;
                double len2 = d.norm2();
                double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
                Vec2 cp = a + t * d;
                if ((p - cp).norm() > radius) continue;
                double zc = s.a.z + t * (s.b.z - s.a.z);
                top = std::max(top, zc + half_h);
            }
            if (top > std::numeric_limits<double>::lowest())
                set.points.push_back({x, y, top});
        }
    }
    if (set.points.empty()) throw std::runtime_error("metrics: reconstruction has zero coverage");
    return set;
}

AccuracyResult accuracy_report(const TriangleMesh& mesh, const std::vector<Toolpath>& planar_paths,
                               const std::vector<Toolpath>& nonplanar_paths, const SlicerConfig& cfg,
                               const Box2& region, int nx, int ny) {
    PointSet source = sample_mesh_surface(mesh, region, nx, ny);
    PointSet planar = reconstruct_deposited_surface(planar_paths, cfg, region, nx, ny);
    PointSet nonplanar = reconstruct_deposited_surface(nonplanar_paths, cfg, region, nx, ny);
    AccuracyResult res;
    res.cd_planar_mm = chamfer(source, planar);
    res.cd_nonplanar_mm = chamfer(source, nonplanar);
    return res;
}

} // namespace npslice
