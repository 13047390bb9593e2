#pragma once

#include <cmath>
#include <stdexcept>

#include "npslice/geometry.hpp"

namespace npslice {

/// Process parameters shared across the pipeline. Lengths in millimeters.
struct SlicerConfig {
    double layer_height = 0.3;
    double extrusion_width = 0.4;
    double threshold_angle_deg = rad_to_deg(std::atan(0.3 / 0.4));
    int wall_count = 1;
    int nonplanar_layer_count = 2;
    double infill_spacing = 0.4;
    double infill_base_angle_deg = 0.0;
    Vec3 extruder_box{10.0, 10.0, 30.0};  // x/y widths centered on the nozzle, height upward

    void validate() const {
        if (layer_height <= 0) throw std::invalid_argument("config: layer_height must be positive");
        if (extrusion_width <= 0) throw std::invalid_argument("config: extrusion_width must be positive");
        if (threshold_angle_deg <= 0 || threshold_angle_deg > 90)
            throw std::invalid_argument("config: threshold_angle_deg must be in (0, 90]");
        if (wall_count < 1) throw std::invalid_argument("config: wall_count must be >= 1");
        if (nonplanar_layer_count < 1)
            throw std::invalid_argument("config: nonplanar_layer_count must be >= 1");
        if (infill_spacing < extrusion_width)
            throw std::invalid_argument("config: infill_spacing must be >= extrusion_width");
        if (extruder_box.x < 0 || extruder_box.y < 0 || extruder_box.z < 0)
            throw std::invalid_argument("config: extruder_box dimensions must be non-negative");
    }
};

} // namespace npslice
