#include <CLI11.hpp>

#include "npslice/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Combined planar / non-planar STL slicer"};
    app.require_subcommand(1);

    npslice::JobConfig job;
    auto* slice = app.add_subcommand("slice", "Slice an STL mesh into extruder toolpaths");
    slice->add_option("input", job.input_path, "input STL file")->required();
    slice->add_option("--layer-height", job.slicer.layer_height, "layer height in mm");
    slice->add_option("--extrusion-width", job.slicer.extrusion_width, "extrusion width in mm");
    double threshold = -1.0;
    slice->add_option("--threshold-angle", threshold,
                      "non-planar threshold angle in degrees (default: atan(h/w))");
    slice->add_option("--walls", job.slicer.wall_count, "number of walls");
    slice->add_option("--nonplanar-layers", job.slicer.nonplanar_layer_count,
                      "number of non-planar layers");
    double spacing = -1.0;
    slice->add_option("--infill-spacing", spacing, "infill line spacing in mm (default: extrusion width)");
    slice->add_option("--infill-angle", job.slicer.infill_base_angle_deg,
                      "base infill angle in degrees");
    slice->add_flag("--force-planar", job.force_planar, "slice everything with planar layers");
    slice->add_flag("--report", job.compute_metrics, "compute the surface accuracy report");
    slice->add_flag("--svg", job.export_svg, "write per-layer SVG previews");
    slice->add_flag("--obj", job.export_obj, "write toolpaths as OBJ polylines");
    slice->add_option("-o,--output", job.output_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (threshold < 0)
        job.slicer.threshold_angle_deg =
            npslice::rad_to_deg(std::atan(job.slicer.layer_height / job.slicer.extrusion_width));
    else
        job.slicer.threshold_angle_deg = threshold;
    job.slicer.infill_spacing = spacing > 0 ? spacing : job.slicer.extrusion_width;

    return npslice::run(job);
}
