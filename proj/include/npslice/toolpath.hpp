#pragma once

#include <string>
#include <vector>

#include "npslice/geometry.hpp"

namespace npslice {

enum class PathRole { OuterWall, InnerWall, Infill };
enum class PathKind { Planar, NonPlanar };

inline const char* to_string(PathRole r) {
    switch (r) {
        case PathRole::OuterWall: return "outer_wall";
        case PathRole::InnerWall: return "inner_wall";
        case PathRole::Infill: return "infill";
    }
    return "";
}

inline const char* to_string(PathKind k) {
    return k == PathKind::Planar ? "planar" : "nonplanar";
}

struct ToolpathPoint {
    Vec3 position;
    Vec3 orientation{0, 0, 1};  // tool axis, unit, z > 0
    bool extruding = true;      // the move arriving at this point deposits material
};

struct Toolpath {
    PathRole role = PathRole::OuterWall;
    PathKind kind = PathKind::Planar;
    int layer = 0;
    int patch = -1;  // -1 for planar paths
    std::vector<ToolpathPoint> points;
};

} // namespace npslice
