#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace npslice {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double px, double py) : x(px), y(py) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm2() const { return x * x + y * y; }
    Vec2 normalized() const { double n = norm(); return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0}; }
    /// 90 degree counterclockwise rotation; the left normal of a direction.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double px, double py, double pz) : x(px), y(py), z(pz) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double norm2() const { return x * x + y * y + z * z; }
    Vec3 normalized() const { double n = norm(); return n > 0 ? Vec3{x / n, y / n, z / n} : Vec3{0, 0, 0}; }
    Vec2 xy() const { return {x, y}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Rotation about the origin. Multiples of 90 degrees are dispatched to
/// exact coordinate swaps so axis-aligned work stays bit-exact.
inline Vec2 rotate(const Vec2& p, double angle_deg) {
    double a = std::fmod(angle_deg, 360.0);
    if (a < 0) a += 360.0;
    if (a == 0.0) return p;
    if (a == 90.0) return {-p.y, p.x};
    if (a == 180.0) return {-p.x, -p.y};
    if (a == 270.0) return {p.y, -p.x};
    double r = deg_to_rad(angle_deg);
    double c = std::cos(r), s = std::sin(r);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Box2 {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

    void expand(const Vec2& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    }
    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
    bool overlaps(const Box2& o, double pad = 0.0) const {
        return lo.x - pad <= o.hi.x && hi.x + pad >= o.lo.x &&
               lo.y - pad <= o.hi.y && hi.y + pad >= o.lo.y;
    }
    Vec2 size() const { return hi - lo; }
};

struct Box3 {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    bool valid() const { return lo.x <= hi.x; }
    Vec3 size() const { return hi - lo; }
};

struct Segment2 {
    Vec2 a;
    Vec2 b;
};

inline Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = d.norm2();
    if (len2 <= 0) return a;
    double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return a + t * d;
}

inline double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    return (p - closest_point_on_segment(p, a, b)).norm();
}

/// Proper + improper straight-line intersection of two segments.
/// Returns true with parameters t (on ab) and u (on cd) when the supporting
/// lines cross inside both segments within `eps` of their parameter range.
/// Collinear configurations return false; callers handle overlaps themselves.
inline bool segment_intersection(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                                 double& t, double& u, double eps = 1e-12) {
    Vec2 r = b - a, s = d - c;
    double denom = r.cross(s);
    if (denom == 0.0) return false;
    Vec2 ca = c - a;
    t = ca.cross(s) / denom;
    u = ca.cross(r) / denom;
    double lo = -eps, hi = 1.0 + eps;
    return t >= lo && t <= hi && u >= lo && u <= hi;
}

/// True strict interior crossing (used by self-intersection audits).
inline bool segments_properly_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                                    double eps = 1e-12) {
    double t, u;
    if (!segment_intersection(a, b, c, d, t, u, 0.0)) return false;
    return t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps;
}

/// Quantized 2D hash key used for tolerant endpoint matching.
inline std::uint64_t quantize_key(const Vec2& p, double cell) {
    auto q = [cell](double v) {
        return static_cast<std::int64_t>(std::llround(v / cell));
    };
    std::uint64_t hx = static_cast<std::uint64_t>(q(p.x)) * 0x9E3779B97F4A7C15ull;
    std::uint64_t hy = static_cast<std::uint64_t>(q(p.y)) * 0xC2B2AE3D27D4EB4Full;
    return hx ^ (hy + 0x165667B19E3779F9ull + (hx << 6) + (hx >> 2));
}

} // namespace npslice
