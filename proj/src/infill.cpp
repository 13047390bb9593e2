#include "npslice/infill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "npslice/boolean2d.hpp"
#include "npslice/offset2d.hpp"

namespace npslice {

bool is_convex(const PolygonChain& chain) {
    const auto& p = chain.pts;
    size_t n = p.size();
    if (n < 3) return false;
    int sign = 0;
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = p[i], b = p[(i + 1) % n], c = p[(i + 2) % n];
        Vec2 e1 = b - a, e2 = c - b;
        double cr = e1.cross(e2);
        double scale = e1.norm() * e2.norm();
        if (std::abs(cr) <= 1e-12 * std::max(scale, 1.0)) continue;  // collinear
        int s = cr > 0 ? 1 : -1;
        if (sign == 0)
            sign = s;
        else if (s != sign)
            return false;
    }
    return true;
}

namespace {

Region rotate_region(const Region& region, double angle_deg) {
    Region out = region;
    for (PolygonChain& c : out)
        for (Vec2& p : c.pts) p = rotate(p, angle_deg);
    return out;
}

// Split/merge event heights: reflex vertices (material on the left) that are
// local extremes in y. Equal-height neighbors count as extreme so flat-topped
// notches and holes still produce their cut.
std::vector<double> event_heights(const Region& region) {
    std::vector<double> ys;
    for (const PolygonChain& c : region) {
        size_t n = c.pts.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2& prev = c.pts[(i + n - 1) % n];
            const Vec2& v = c.pts[i];
            const Vec2& next = c.pts[(i + 1) % n];
            Vec2 e1 = v - prev, e2 = next - v;
            if (e1.cross(e2) >= -1e-12) continue;  // not reflex
            bool local_min = prev.y >= v.y - 1e-12 && next.y >= v.y - 1e-12;
            bool local_max = prev.y <= v.y + 1e-12 && next.y <= v.y + 1e-12;
            if (local_min || local_max) ys.push_back(v.y);
        }
    }
    std::sort(ys.begin(), ys.end(), std::greater<double>());
    ys.erase(std::unique(ys.begin(), ys.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             ys.end());
    return ys;
}

bool lex_less(const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

} // namespace

std::vector<MonotonePolygon> decompose_monotone(const Region& region_in, double sweep_angle_deg) {
    std::vector<MonotonePolygon> out;
    Region region;
    for (const PolygonChain& c : region_in)
        if (c.closed && c.pts.size() >= 3) region.push_back(c);
    if (region.empty() || std::abs(region_area(region)) < 1e-9) return out;
    identify_holes(region);

    Region rot = rotate_region(region, -sweep_angle_deg);
    std::vector<double> events = event_heights(rot);

    Box2 bb = region_bbox(rot);
    double x0 = bb.lo.x - 1.0, x1 = bb.hi.x + 1.0;
    std::vector<double> cuts;
    cuts.push_back(bb.hi.y + 1.0);
    for (double y : events)
        if (y > bb.lo.y + 1e-9 && y < bb.hi.y - 1e-9) cuts.push_back(y);
    cuts.push_back(bb.lo.y - 1.0);

    Vec2 sweep_dir = rotate({0, 1}, sweep_angle_deg);
    for (size_t band = 0; band + 1 < cuts.size(); ++band) {
        double y_hi = cuts[band], y_lo = cuts[band + 1];
        PolygonChain strip;
        strip.pts = {{x0, y_lo}, {x1, y_lo}, {x1, y_hi}, {x0, y_hi}};
        Region strip_region{strip};
        Region piece = region_boolean(rot, strip_region, BoolOp::Intersection);

        std::vector<const PolygonChain*> solids;
        for (const PolygonChain& c : piece)
            if (!c.is_hole && std::abs(c.signed_area()) > 1e-9) solids.push_back(&c);
        std::sort(solids.begin(), solids.end(), [](const PolygonChain* a, const PolygonChain* b) {
            return lex_less(a->pts[0], b->pts[0]);
        });
        for (const PolygonChain* c : solids) {
            MonotonePolygon mp;
            mp.band = static_cast<int>(band);
            mp.sweep_dir = sweep_dir;
            mp.sweep_angle_deg = sweep_angle_deg;
            mp.pts.reserve(c->pts.size());
            for (const Vec2& p : c->pts) mp.pts.push_back(rotate(p, sweep_angle_deg));
            out.push_back(std::move(mp));
        }
    }
    return out;
}

std::vector<int> order_subpolygons(const std::vector<MonotonePolygon>& subpolys) {
    size_t n = subpolys.size();
    std::vector<std::vector<int>> adj(n);

    // Vertices shared between polygons, matched through a quantized key.
    std::unordered_multimap<std::uint64_t, int> vert_owner;
    constexpr double kCell = 1e-9;
    for (size_t i = 0; i < n; ++i)
        for (const Vec2& p : subpolys[i].pts)
            vert_owner.emplace(quantize_key(p, kCell), static_cast<int>(i));

    std::unordered_map<std::uint64_t, int> shared_count;
    for (size_t i = 0; i < n; ++i) {
        for (const Vec2& p : subpolys[i].pts) {
            auto range = vert_owner.equal_range(quantize_key(p, kCell));
            for (auto it = range.first; it != range.second; ++it) {
                int j = it->second;
                if (j <= static_cast<int>(i)) continue;
                ++shared_count[(static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j)];
            }
        }
    }
    for (const auto& [key, cnt] : shared_count) {
        if (cnt < 2) continue;
        int i = static_cast<int>(key >> 32);
        int j = static_cast<int>(key & 0xffffffffu);
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<int> order;
    std::vector<bool> visited(n, false);
    for (size_t start = 0; start < n; ++start) {
        if (visited[start]) continue;
        std::vector<int> stack{static_cast<int>(start)};
        visited[start] = true;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            order.push_back(cur);
            // Push in reverse so lower-indexed neighbors are visited first.
            for (auto it = adj[cur].rbegin(); it != adj[cur].rend(); ++it) {
                if (!visited[*it]) {
                    visited[*it] = true;
                    stack.push_back(*it);
                }
            }
        }
    }
    return order;
}

namespace {

struct Crossing {
    double x;
    size_t edge;
    double t;
};

// Boundary crossings of the horizontal line, with near-line vertices nudged
// upward so vertex grazes resolve deterministically.
std::vector<Crossing> line_crossings(const std::vector<Vec2>& pts, double y) {
    auto side = [y](double v) {
        double s = v - y;
        return std::abs(s) < 1e-12 ? 1e-12 : s;
    };
    std::vector<Crossing> hits;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        double sa = side(a.y), sb = side(b.y);
        if ((sa > 0) == (sb > 0)) continue;
        double t = sa / (sa - sb);
        hits.push_back({a.x + t * (b.x - a.x), i, t});
    }
    std::sort(hits.begin(), hits.end(), [](const Crossing& u, const Crossing& v) { return u.x < v.x; });
    return hits;
}

// Boundary walk between two crossing positions; returns intermediate
// vertices. Tries forward first, falls back to the backward walk if the
// forward route leaves the y-band between the two passes.
std::vector<Vec2> boundary_walk(const std::vector<Vec2>& pts, const Crossing& from, const Crossing& to,
                                double y_lo, double y_hi) {
    size_t n = pts.size();
    auto collect = [&](bool forward) {
        std::vector<Vec2> mid;
        if (forward) {
            if (from.edge == to.edge && to.t >= from.t) return std::make_pair(true, mid);
            size_t i = (from.edge + 1) % n;
            while (true) {
                mid.push_back(pts[i]);
                if (i == to.edge) break;
                i = (i + 1) % n;
                if (mid.size() > n) return std::make_pair(false, std::vector<Vec2>{});
            }
        } else {
            if (from.edge == to.edge && to.t <= from.t) return std::make_pair(true, mid);
            size_t i = from.edge;
            while (true) {
                mid.push_back(pts[i]);
                if (i == (to.edge + 1) % n) break;
                i = (i + n - 1) % n;
                if (mid.size() > n) return std::make_pair(false, std::vector<Vec2>{});
            }
        }
        for (const Vec2& p : mid)
            if (p.y < y_lo - 1e-9 || p.y > y_hi + 1e-9) return std::make_pair(false, std::vector<Vec2>{});
        return std::make_pair(true, mid);
    };
    auto fwd = collect(true);
    if (fwd.first) return fwd.second;
    auto bwd = collect(false);
    if (bwd.first) return bwd.second;
    return {};  // fall back to a direct jump
}

} // namespace

InfillPath zigzag(const MonotonePolygon& poly, double d, double angle_deg) {
    InfillPath path;
    path.spacing = d;
    path.angle_deg = angle_deg;
    if (poly.pts.size() < 3 || d <= 0) return path;

    std::vector<Vec2> pts(poly.pts.size());
    for (size_t i = 0; i < poly.pts.size(); ++i) pts[i] = rotate(poly.pts[i], -angle_deg);

    double y_min = pts[0].y, y_max = pts[0].y;
    for (const Vec2& p : pts) {
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }

    struct Pass {
        Crossing left, right;
        double y;
    };
    std::vector<Pass> passes;
    for (int n = 1;; ++n) {
        double y = y_min + n * d;
        if (y >= y_max - 1e-9) break;
        auto hits = line_crossings(pts, y);
        if (hits.size() < 2) continue;
        passes.push_back({hits.front(), hits.back(), y});
    }
    if (passes.empty()) return path;

    std::vector<Vec2> line;
    for (size_t i = 0; i < passes.size(); ++i) {
        bool ltr = (i % 2) == 0;  // first pass left to right, then alternate
        const Crossing& start = ltr ? passes[i].left : passes[i].right;
        const Crossing& end = ltr ? passes[i].right : passes[i].left;
        Vec2 sp{start.x, passes[i].y}, ep{end.x, passes[i].y};
        if (i == 0) {
            line.push_back(sp);
        } else {
            const Crossing& prev_end = (i % 2) == 1 ? passes[i - 1].right : passes[i - 1].left;
            auto mid = boundary_walk(pts, prev_end, start, passes[i - 1].y, passes[i].y);
            for (const Vec2& m : mid) line.push_back(m);
            line.push_back(sp);
        }
        line.push_back(ep);
    }

    path.polyline.reserve(line.size());
    for (const Vec2& p : line) path.polyline.push_back(rotate(p, angle_deg));
    return path;
}

WallSet generate_walls(const Region& layer_chains, const SlicerConfig& cfg) {
    WallSet ws;
    if (layer_chains.empty()) return ws;
    for (int k = 0; k < cfg.wall_count; ++k) {
        Region ring = ss_offset(layer_chains, (0.5 + k) * cfg.extrusion_width);
        if (!ring.empty()) ws.walls.push_back(std::move(ring));
    }
    ws.infill_boundary = ss_offset(layer_chains, (0.5 + cfg.wall_count) * cfg.extrusion_width);
    return ws;
}

} // namespace npslice
