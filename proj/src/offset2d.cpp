#include "npslice/offset2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npslice/boolean2d.hpp"

namespace npslice {

namespace {

// Chord sagitta tolerance for the reflex-corner arcs. Also the slack allowed
// in the keep test, so chord midpoints of a valid arc are not trimmed.
constexpr double kArcTol = 0.002;

double arc_step(double radius) {
    if (radius <= kArcTol) return kPi / 4;
    return 2.0 * std::acos(std::max(0.0, 1.0 - kArcTol / radius));
}

struct Candidate {
    Vec2 a;
    Vec2 b;
};

void emit_arc(std::vector<Candidate>& out, const Vec2& center, double radius, const Vec2& n_from,
              const Vec2& n_to) {
    double a0 = std::atan2(n_from.y, n_from.x);
    double a1 = std::atan2(n_to.y, n_to.x);
    double sweep = a0 - a1;  // clockwise amount
    while (sweep < 0) sweep += 2 * kPi;
    while (sweep >= 2 * kPi) sweep -= 2 * kPi;
    if (sweep < 1e-9) return;
    int steps = std::max(2, static_cast<int>(std::ceil(sweep / arc_step(radius))));
    Vec2 prev = center + radius * n_from;
    for (int k = 1; k <= steps; ++k) {
        Vec2 p;
        if (k == steps) {
            p = center + radius * n_to;  // bit-exact join with the next offset segment
        } else {
            double a = a0 - sweep * k / steps;
            p = center + radius * Vec2{std::cos(a), std::sin(a)};
        }
        out.push_back({prev, p});
        prev = p;
    }
}

} // namespace

Region ss_offset(const Region& region_in, double d) {
    if (d <= 0) throw std::invalid_argument("path2d: offset distance must be positive");

    Region region;
    for (const PolygonChain& c : region_in)
        if (c.closed && c.pts.size() >= 3) region.push_back(c);
    if (region.empty()) return {};
    identify_holes(region);  // enforce solids CCW / holes CW and validate nesting

    Box2 bb = region_bbox(region);
    double miter_cap = (bb.size().norm()) + 2 * d;

    std::vector<Candidate> cand;
    for (const PolygonChain& chain : region) {
        size_t n = chain.pts.size();
        // Per-edge unit direction and left normal (material side).
        std::vector<Vec2> dir(n), nrm(n);
        for (size_t i = 0; i < n; ++i) {
            Vec2 e = chain.pts[(i + 1) % n] - chain.pts[i];
            double len = e.norm();
            if (len <= 1e-12) {
                dir[i] = {0, 0};
                nrm[i] = {0, 0};
                continue;
            }
            dir[i] = e / len;
            nrm[i] = dir[i].perp();
        }
        for (size_t i = 0; i < n; ++i) {
            if (dir[i] == Vec2{0, 0}) continue;
            Vec2 a = chain.pts[i] + d * nrm[i];
            Vec2 b = chain.pts[(i + 1) % n] + d * nrm[i];
            cand.push_back({a, b});

            // Join at the vertex between edge i and the next non-degenerate edge.
            size_t j = (i + 1) % n;
            while (dir[j] == Vec2{0, 0} && j != i) j = (j + 1) % n;
            if (j == i) continue;
            const Vec2& v = chain.pts[(i + 1) % n];
            double turn = dir[i].cross(dir[j]);
            if (turn > 1e-12) {
                // Convex corner: extend both offset lines to their miter point.
                Vec2 p1 = v + d * nrm[i];
                Vec2 p2 = v + d * nrm[j];
                double t = (p2 - p1).cross(dir[j]) / turn;
                t = std::clamp(t, -miter_cap, miter_cap);
                Vec2 m = p1 + t * dir[i];
                cand.push_back({p1, m});
                cand.push_back({m, p2});
            } else if (turn < -1e-12 || dir[i].dot(dir[j]) < 0) {
                emit_arc(cand, v, d, nrm[i], nrm[j]);
            }
            // Collinear continuation: offset endpoints already coincide.
        }
    }

    std::vector<Segment2> segs;
    segs.reserve(cand.size());
    for (const Candidate& c : cand) segs.push_back({c.a, c.b});
    auto split = detail::split_all(segs);

    double keep_floor = d - (kArcTol + 1e-9);
    std::vector<detail::DirectedSegment> kept;
    for (const auto& pts : split) {
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            Vec2 m = (pts[i] + pts[i + 1]) * 0.5;
            if (dist_to_region_boundary(region, m) < keep_floor) continue;
            if (!point_in_region(region, m)) continue;
            kept.push_back({pts[i], pts[i + 1]});
        }
    }

    Region result = detail::chain_directed(kept, 1e-7, nullptr);
    // The keep-test slack can leave micro-loops near tangencies; they are
    // below the arc tolerance and far below printable scale.
    constexpr double kMinLoopArea = 1e-4;
    result.erase(std::remove_if(result.begin(), result.end(),
                                [](const PolygonChain& c) {
                                    return std::abs(c.signed_area()) < kMinLoopArea;
                                }),
                 result.end());
    identify_holes(result);
    return result;
}

} // namespace npslice
