#include "npslice/boolean2d.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace npslice {
namespace detail {

namespace {

constexpr double kSnap = 1e-9;

struct SplitPoint {
    double t;
    Vec2 p;
};

// Registers one intersection event between segments i and j of `segs`,
// storing bit-identical points on both sides.
void register_pair(const std::vector<Segment2>& segs, std::vector<std::vector<SplitPoint>>& splits,
                   size_t i, size_t j) {
    const Vec2& a = segs[i].a;
    const Vec2& b = segs[i].b;
    const Vec2& c = segs[j].a;
    const Vec2& d = segs[j].b;
    Vec2 r = b - a, s = d - c;
    double len_i = r.norm(), len_j = s.norm();
    if (len_i <= 0 || len_j <= 0) return;

    double denom = r.cross(s);
    bool parallel = std::abs(denom) <= 1e-9 * len_i * len_j;
    if (parallel) {
        if (dist_point_segment(c, a, b) > kSnap && dist_point_segment(d, a, b) > kSnap) return;
        // Collinear overlap: split each segment at the other's interior endpoints.
        auto project = [](const Vec2& p, const Vec2& o, const Vec2& dir, double len) {
            return (p - o).dot(dir) / (len * len);
        };
        auto add_if_interior = [&](size_t seg, double t, const Vec2& p, double len) {
            if (t * len > kSnap && (1.0 - t) * len > kSnap) splits[seg].push_back({t, p});
        };
        add_if_interior(i, project(c, a, r, len_i), c, len_i);
        add_if_interior(i, project(d, a, r, len_i), d, len_i);
        add_if_interior(j, project(a, c, s, len_j), a, len_j);
        add_if_interior(j, project(b, c, s, len_j), b, len_j);
        return;
    }

    Vec2 ca = c - a;
    double t = ca.cross(s) / denom;
    double u = ca.cross(r) / denom;
    if (t * len_i < -kSnap || (t - 1.0) * len_i > kSnap) return;
    if (u * len_j < -kSnap || (u - 1.0) * len_j > kSnap) return;

    bool t_interior = t * len_i > kSnap && (1.0 - t) * len_i > kSnap;
    bool u_interior = u * len_j > kSnap && (1.0 - u) * len_j > kSnap;
    if (!t_interior && !u_interior) return;

    // Snap to an exact endpoint when the crossing grazes one.
    Vec2 p;
    if (!t_interior)
        p = (t * len_i <= kSnap) ? a : b;
    else if (!u_interior)
        p = (u * len_j <= kSnap) ? c : d;
    else
        p = a + t * r;

    if (t_interior) splits[i].push_back({t, p});
    if (u_interior) splits[j].push_back({u, p});
}

} // namespace

std::vector<std::vector<Vec2>> split_all(const std::vector<Segment2>& segs) {
    size_t n = segs.size();
    std::vector<std::vector<SplitPoint>> splits(n);

    // Uniform-grid broadphase over segment bounding boxes.
    Box2 world;
    double total_len = 0;
    for (const Segment2& s : segs) {
        world.expand(s.a);
        world.expand(s.b);
        total_len += (s.b - s.a).norm();
    }
    if (!world.valid()) return {};
    double cell = std::max(total_len / std::max<size_t>(n, 1), 1e-3);
    auto cell_of = [&](double v, double origin) {
        return static_cast<long>(std::floor((v - origin) / cell));
    };
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    auto key = [](long cx, long cy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) ^
               static_cast<std::uint32_t>(cy);
    };
    for (size_t i = 0; i < n; ++i) {
        Box2 bb;
        bb.expand(segs[i].a);
        bb.expand(segs[i].b);
        long x0 = cell_of(bb.lo.x - kSnap, world.lo.x), x1 = cell_of(bb.hi.x + kSnap, world.lo.x);
        long y0 = cell_of(bb.lo.y - kSnap, world.lo.y), y1 = cell_of(bb.hi.y + kSnap, world.lo.y);
        for (long cx = x0; cx <= x1; ++cx)
            for (long cy = y0; cy <= y1; ++cy)
                grid[key(cx, cy)].push_back(static_cast<int>(i));
    }
    std::unordered_set<std::uint64_t> tested;
    for (auto& [k, ids] : grid) {
        (void)k;
        for (size_t ai = 0; ai < ids.size(); ++ai)
            for (size_t bi = ai + 1; bi < ids.size(); ++bi) {
                std::uint64_t i = static_cast<std::uint64_t>(std::min(ids[ai], ids[bi]));
                std::uint64_t j = static_cast<std::uint64_t>(std::max(ids[ai], ids[bi]));
                if (!tested.insert((i << 32) | j).second) continue;
                register_pair(segs, splits, i, j);
            }
    }

    std::vector<std::vector<Vec2>> out(n);
    for (size_t i = 0; i < n; ++i) {
        auto& sp = splits[i];
        std::sort(sp.begin(), sp.end(), [](const SplitPoint& x, const SplitPoint& y) { return x.t < y.t; });
        std::vector<Vec2> pts;
        pts.push_back(segs[i].a);
        for (const SplitPoint& s : sp) {
            if ((s.p - pts.back()).norm() > kSnap) pts.push_back(s.p);
        }
        if ((segs[i].b - pts.back()).norm() > kSnap)
            pts.push_back(segs[i].b);
        else
            pts.back() = segs[i].b;
        out[i] = std::move(pts);
    }
    return out;
}

std::vector<PolygonChain> chain_directed(const std::vector<DirectedSegment>& segs, double tol,
                                         int* open_count) {
    struct Node {
        Vec2 p;
        int seg;
    };
    double cell = std::max(tol, 1e-12);
    std::unordered_multimap<std::uint64_t, Node> starts;
    auto key_of = [&](const Vec2& p, int dx, int dy) {
        return quantize_key({p.x + dx * cell, p.y + dy * cell}, cell);
    };
    for (size_t i = 0; i < segs.size(); ++i)
        starts.emplace(key_of(segs[i].a, 0, 0), Node{segs[i].a, static_cast<int>(i)});

    auto lex_less = [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    };
    std::vector<int> seed(segs.size());
    for (size_t i = 0; i < segs.size(); ++i) seed[i] = static_cast<int>(i);
    std::sort(seed.begin(), seed.end(), [&](int i, int j) {
        if (segs[i].a == segs[j].a) return lex_less(segs[i].b, segs[j].b);
        return lex_less(segs[i].a, segs[j].a);
    });

    std::vector<bool> used(segs.size(), false);
    std::vector<PolygonChain> out;
    int opens = 0;

    for (int s0 : seed) {
        if (used[s0]) continue;
        used[s0] = true;
        std::vector<Vec2> loop{segs[s0].a, segs[s0].b};
        Vec2 dir = (segs[s0].b - segs[s0].a).normalized();
        bool closed = false;
        while (true) {
            Vec2 tip = loop.back();
            // Candidates starting at the tip; sharpest left turn wins.
            int best = -1;
            double best_turn = -10.0;
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    auto range = starts.equal_range(key_of(tip, dx, dy));
                    for (auto it = range.first; it != range.second; ++it) {
                        int si = it->second.seg;
                        if (used[si]) continue;
                        if ((it->second.p - tip).norm() > tol) continue;
                        Vec2 nd = (segs[si].b - segs[si].a).normalized();
                        double turn = std::atan2(dir.cross(nd), dir.dot(nd));
                        if (turn > best_turn + 1e-12 ||
                            (std::abs(turn - best_turn) <= 1e-12 && (best == -1 || si < best))) {
                            best_turn = turn;
                            best = si;
                        }
                    }
                }
            if (best < 0) break;
            used[best] = true;
            loop.push_back(segs[best].b);
            dir = (segs[best].b - segs[best].a).normalized();
            if ((loop.back() - loop.front()).norm() <= tol && loop.size() >= 4) {
                closed = true;
                break;
            }
        }
        if (!closed) {
            ++opens;
            continue;
        }
        loop.pop_back();
        PolygonChain pc;
        pc.pts = std::move(loop);
        pc.closed = true;
        if (std::abs(pc.signed_area()) < 1e-9) continue;
        pc.canonicalize_start();
        out.push_back(std::move(pc));
    }
    if (open_count) *open_count = opens;
    return out;
}

} // namespace detail

namespace {

bool apply_op(BoolOp op, bool in_a, bool in_b) {
    switch (op) {
        case BoolOp::Union: return in_a || in_b;
        case BoolOp::Intersection: return in_a && in_b;
        case BoolOp::Difference: return in_a && !in_b;
    }
    return false;
}

} // namespace

Region region_boolean(const Region& a, const Region& b, BoolOp op) {
    std::vector<Segment2> segs;
    auto gather = [&segs](const Region& r) {
        for (const PolygonChain& c : r) {
            if (!c.closed || c.pts.size() < 3) continue;
            for (size_t i = 0; i < c.pts.size(); ++i) {
                Vec2 p = c.pts[i], q = c.pts[(i + 1) % c.pts.size()];
                if ((q - p).norm() > 1e-12) segs.push_back({p, q});
            }
        }
    };
    gather(a);
    gather(b);
    if (segs.empty()) return {};

    auto split = detail::split_all(segs);

    // Unique undirected sub-segments (coincident boundaries collapse to one).
    struct Sub {
        Vec2 p, q;
    };
    std::vector<Sub> subs;
    std::unordered_multimap<std::uint64_t, int> seen;
    double cell = 1e-8;
    auto canon_key = [&](const Vec2& p, const Vec2& q, int dx, int dy) {
        std::uint64_t kp = quantize_key({p.x + dx * cell, p.y + dy * cell}, cell);
        std::uint64_t kq = quantize_key({q.x + dx * cell, q.y + dy * cell}, cell);
        return kp ^ (kq * 0x9E3779B97F4A7C15ull);
    };
    auto lex_less = [](const Vec2& u, const Vec2& v) {
        return u.x < v.x || (u.x == v.x && u.y < v.y);
    };
    for (const auto& pts : split) {
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            Vec2 p = pts[i], q = pts[i + 1];
            if (lex_less(q, p)) std::swap(p, q);
            bool dup = false;
            for (int dx = -1; dx <= 1 && !dup; ++dx)
                for (int dy = -1; dy <= 1 && !dup; ++dy) {
                    auto range = seen.equal_range(canon_key(p, q, dx, dy));
                    for (auto it = range.first; it != range.second; ++it) {
                        const Sub& s = subs[it->second];
                        if ((s.p - p).norm() <= 2e-8 && (s.q - q).norm() <= 2e-8) {
                            dup = true;
                            break;
                        }
                    }
                }
            if (dup) continue;
            seen.emplace(canon_key(p, q, 0, 0), static_cast<int>(subs.size()));
            subs.push_back({p, q});
        }
    }

    // Classify by even-odd parity just off each side of the sub-segment.
    constexpr double kSampleOffset = 1e-6;
    std::vector<detail::DirectedSegment> kept;
    for (const Sub& s : subs) {
        Vec2 m = (s.p + s.q) * 0.5;
        Vec2 n = (s.q - s.p).normalized().perp();
        Vec2 left = m + kSampleOffset * n;
        Vec2 right = m - kSampleOffset * n;
        bool out_left = apply_op(op, point_in_region(a, left), point_in_region(b, left));
        bool out_right = apply_op(op, point_in_region(a, right), point_in_region(b, right));
        if (out_left == out_right) continue;
        if (out_left)
            kept.push_back({s.p, s.q});
        else
            kept.push_back({s.q, s.p});
    }

    Region result = detail::chain_directed(kept, 1e-7, nullptr);
    identify_holes(result);
    return result;
}

double region_intersection_area(const Region& a, const Region& b) {
    if (a.empty() || b.empty()) return 0.0;
    Region inter = region_boolean(a, b, BoolOp::Intersection);
    return std::abs(region_area(inter));
}

} // namespace npslice
