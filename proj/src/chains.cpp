#include "npslice/chains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace npslice {

double PolygonChain::signed_area() const {
    if (pts.size() < 3) return 0.0;
    double a = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % pts.size()];
        a += p.cross(q);
    }
    return 0.5 * a;
}

void PolygonChain::reverse() { std::reverse(pts.begin(), pts.end()); }

void PolygonChain::canonicalize_start() {
    if (!closed || pts.empty()) return;
    auto lex_less = [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    };
    size_t best = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (lex_less(pts[i], pts[best])) best = i;
    std::rotate(pts.begin(), pts.begin() + best, pts.end());
}

Box2 PolygonChain::bbox() const {
    Box2 b;
    for (const Vec2& p : pts) b.expand(p);
    return b;
}

namespace {

// Endpoint index with tolerant lookup: buckets of size `tol`, neighbor cells
// scanned so points straddling a bucket boundary still match.
class EndpointIndex {
public:
    explicit EndpointIndex(double tol) : tol_(tol), cell_(std::max(tol, 1e-12)) {}

    void insert(const Vec2& p, int id) {
        table_.emplace(cell_key(p, 0, 0), Entry{p, id});
    }

    // Finds the nearest live entry within tol; -1 if none.
    int find(const Vec2& p, const std::vector<bool>& dead) const {
        int best = -1;
        double best_d = tol_;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                auto range = table_.equal_range(cell_key(p, dx, dy));
                for (auto it = range.first; it != range.second; ++it) {
                    if (dead[it->second.id / 2]) continue;
                    double d = (it->second.p - p).norm();
                    if (d <= best_d && (best == -1 || d < best_d ||
                                        it->second.id < best)) {
                        best_d = d;
                        best = it->second.id;
                    }
                }
            }
        }
        return best;
    }

private:
    struct Entry {
        Vec2 p;
        int id;  // 2*segment + (0 for a, 1 for b)
    };

    std::uint64_t cell_key(const Vec2& p, int dx, int dy) const {
        Vec2 shifted{p.x + dx * cell_, p.y + dy * cell_};
        return quantize_key(shifted, cell_);
    }

    double tol_;
    double cell_;
    std::unordered_multimap<std::uint64_t, Entry> table_;
};

bool lex_less(const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

} // namespace

std::vector<PolygonChain> sort_segments(const std::vector<Segment2>& segments, double tol,
                                        SortReport* report) {
    SortReport rep;
    std::vector<Segment2> segs;
    segs.reserve(segments.size());
    for (const Segment2& s : segments) {
        if ((s.b - s.a).norm() <= tol) {
            ++rep.dropped_degenerate;
            continue;
        }
        segs.push_back(s);
    }

    EndpointIndex index(tol);
    for (size_t i = 0; i < segs.size(); ++i) {
        index.insert(segs[i].a, static_cast<int>(2 * i));
        index.insert(segs[i].b, static_cast<int>(2 * i + 1));
    }

    std::vector<bool> used(segs.size(), false);
    std::vector<PolygonChain> out;

    // Seed order: segments sorted by their lexicographically smaller endpoint,
    // so chain membership and output do not depend on input order.
    std::vector<int> seed_order(segs.size());
    for (size_t i = 0; i < segs.size(); ++i) seed_order[i] = static_cast<int>(i);
    std::sort(seed_order.begin(), seed_order.end(), [&](int i, int j) {
        Vec2 ai = lex_less(segs[i].a, segs[i].b) ? segs[i].a : segs[i].b;
        Vec2 aj = lex_less(segs[j].a, segs[j].b) ? segs[j].a : segs[j].b;
        if (ai == aj) {
            Vec2 bi = lex_less(segs[i].a, segs[i].b) ? segs[i].b : segs[i].a;
            Vec2 bj = lex_less(segs[j].a, segs[j].b) ? segs[j].b : segs[j].a;
            return lex_less(bi, bj);
        }
        return lex_less(ai, aj);
    });

    for (int seed : seed_order) {
        if (used[seed]) continue;
        used[seed] = true;
        std::vector<Vec2> chain{segs[seed].a, segs[seed].b};
        bool closed = false;

        // Grow forward from the tail, then backward from the head. Junction
        // coordinates are canonicalized to the lexicographically smaller of
        // the two matched endpoints so the output does not depend on
        // traversal order.
        for (int dir = 0; dir < 2; ++dir) {
            while (true) {
                Vec2 tip = dir == 0 ? chain.back() : chain.front();
                int hit = index.find(tip, used);
                if (hit < 0) break;
                int si = hit / 2;
                used[si] = true;
                Vec2 matched = (hit % 2 == 0) ? segs[si].a : segs[si].b;
                Vec2 junction = lex_less(matched, tip) ? matched : tip;
                Vec2 next = (hit % 2 == 0) ? segs[si].b : segs[si].a;
                if (dir == 0) {
                    chain.back() = junction;
                    chain.push_back(next);
                } else {
                    chain.front() = junction;
                    chain.insert(chain.begin(), next);
                }
                if ((chain.back() - chain.front()).norm() <= tol && chain.size() >= 3) {
                    Vec2 closing = lex_less(chain.front(), chain.back()) ? chain.front() : chain.back();
                    chain.front() = closing;
                    chain.back() = closing;
                    closed = true;
                    break;
                }
            }
            if (closed) break;
        }

        PolygonChain pc;
        pc.closed = closed;
        pc.pts = std::move(chain);
        if (closed) {
            pc.pts.pop_back();  // implicit closure
            if (pc.pts.size() < 3) {
                ++rep.dropped_degenerate;
                continue;
            }
            if (!pc.is_ccw()) pc.reverse();
            pc.canonicalize_start();
        } else {
            ++rep.open_chains;
            if (lex_less(pc.pts.back(), pc.pts.front()))
                pc.reverse();
        }
        out.push_back(std::move(pc));
    }

    std::sort(out.begin(), out.end(), [](const PolygonChain& a, const PolygonChain& b) {
        if (a.pts.empty() || b.pts.empty()) return a.pts.size() < b.pts.size();
        if (a.pts[0] == b.pts[0]) return a.pts.size() < b.pts.size();
        return lex_less(a.pts[0], b.pts[0]);
    });

    if (report) *report = rep;
    return out;
}

bool point_in_chain(const PolygonChain& chain, const Vec2& p) {
    bool inside = false;
    size_t n = chain.pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = chain.pts[i];
        const Vec2& b = chain.pts[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xint > p.x) inside = !inside;
        }
    }
    return inside;
}

bool point_in_region(const Region& region, const Vec2& p) {
    int crossings = 0;
    for (const PolygonChain& c : region) {
        if (!c.closed) continue;
        if (point_in_chain(c, p)) ++crossings;
    }
    return (crossings % 2) == 1;
}

void identify_holes(std::vector<PolygonChain>& chains) {
    size_t n = chains.size();
    // Reject crossing chains: any proper segment-pair crossing between chains.
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const auto& a = chains[i].pts;
            const auto& b = chains[j].pts;
            Box2 bi = chains[i].bbox(), bj = chains[j].bbox();
            if (!bi.overlaps(bj)) continue;
            for (size_t ia = 0; ia < a.size(); ++ia) {
                Vec2 a0 = a[ia], a1 = a[(ia + 1) % a.size()];
                for (size_t ib = 0; ib < b.size(); ++ib) {
                    Vec2 b0 = b[ib], b1 = b[(ib + 1) % b.size()];
                    if (segments_properly_cross(a0, a1, b0, b1, 1e-9))
                        throw std::runtime_error("planar_slice: intersecting cross-section chains");
                }
            }
        }
    }

    std::vector<double> abs_area(n);
    for (size_t i = 0; i < n; ++i) abs_area[i] = std::abs(chains[i].signed_area());

    for (size_t i = 0; i < n; ++i) {
        int depth = 0;
        int parent = -1;
        double parent_area = std::numeric_limits<double>::max();
        // Representative interior point: midpoint of first edge nudged along
        // the inward normal would be fragile; a vertex works because chains
        // are disjoint by precondition.
        Vec2 probe = chains[i].pts.front();
        for (size_t j = 0; j < n; ++j) {
            if (i == j || !chains[j].closed) continue;
            if (point_in_chain(chains[j], probe)) {
                ++depth;
                if (abs_area[j] < parent_area) {
                    parent_area = abs_area[j];
                    parent = static_cast<int>(j);
                }
            }
        }
        chains[i].is_hole = (depth % 2) == 1;
        chains[i].parent = parent;
        bool want_ccw = !chains[i].is_hole;
        if (chains[i].is_ccw() != want_ccw) {
            chains[i].reverse();
            chains[i].canonicalize_start();
        }
    }
}

double region_area(const Region& region) {
    double a = 0.0;
    for (const PolygonChain& c : region)
        if (c.closed) a += c.signed_area();
    return a;
}

Box2 region_bbox(const Region& region) {
    Box2 b;
    for (const PolygonChain& c : region)
        for (const Vec2& p : c.pts) b.expand(p);
    return b;
}

double dist_to_region_boundary(const Region& region, const Vec2& p) {
    double best = std::numeric_limits<double>::max();
    for (const PolygonChain& c : region) {
        size_t n = c.pts.size();
        for (size_t i = 0; i < n; ++i) {
            size_t j = (i + 1) % n;
            if (!c.closed && j == 0) break;
            best = std::min(best, dist_point_segment(p, c.pts[i], c.pts[j]));
        }
    }
    return best;
}

} // namespace npslice
