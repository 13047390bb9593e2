#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "npslice/export.hpp"
#include "npslice/nonplanar.hpp"
#include "npslice/pipeline.hpp"
#include "npslice/surface_offset.hpp"
#include "testmeshes.hpp"

using namespace npslice;

namespace {

TriangleMesh small_dome() {
    return testmeshes::heightfield(-8, 8, -8, 8, 24, [](double x, double y) {
        double r = std::hypot(x, y);
        double u = std::min(r / 7.5, 1.0);
        return 3.0 + 1.8 * (1 - 3 * u * u + 2 * u * u * u);
    });
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

std::string temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(dir);
    return dir.string();
}

} // namespace

TEST_CASE("pipeline smoke run emits planar and non-planar paths in print order") {
    TriangleMesh mesh = small_dome();
    SlicerConfig cfg;
    PipelineResult result = run_pipeline(mesh, cfg, false, false);

    CHECK(result.patch_count >= 1);
    CHECK(result.planar_layer_count > 0);
    CHECK(result.nonplanar_layer_count >= 1);

    bool seen_planar = false, seen_nonplanar = false;
    int last_planar_layer = -1;
    bool nonplanar_started = false;
    PathRole last_role = PathRole::OuterWall;
    int last_layer = -1;
    for (const Toolpath& tp : result.paths) {
        if (tp.kind == PathKind::Planar) {
            seen_planar = true;
            CHECK(!nonplanar_started);  // non-planar comes after all planar
            CHECK(tp.layer >= last_planar_layer);
            if (tp.layer > last_planar_layer) {
                last_planar_layer = tp.layer;
            }
            // Within a layer: outer wall, then inner walls, then infill.
            if (tp.layer == last_layer)
                CHECK(static_cast<int>(tp.role) >= static_cast<int>(last_role));
            last_role = tp.role;
            last_layer = tp.layer;
        } else {
            seen_nonplanar = true;
            nonplanar_started = true;
            CHECK(tp.patch >= 0);
        }
    }
    CHECK(seen_planar);
    CHECK(seen_nonplanar);
}

TEST_CASE("force planar yields zero non-planar paths") {
    TriangleMesh mesh = small_dome();
    SlicerConfig cfg;
    PipelineResult result = run_pipeline(mesh, cfg, true, false);
    CHECK(result.patch_count == 0);
    for (const Toolpath& tp : result.paths) CHECK(tp.kind == PathKind::Planar);
}

TEST_CASE("toolpath json: empty path list") {
    std::string path = temp_dir("npslice_json") + "/empty.json";
    export_toolpath_json({}, SlicerConfig{}, path);
    auto j = nlohmann::json::parse(slurp(path));
    REQUIRE(j.contains("paths"));
    CHECK(j["paths"].is_array());
    CHECK(j["paths"].empty());
    CHECK(j["config"]["layer_height"] == 0.3);
}

TEST_CASE("toolpath json: one path with two points follows the schema") {
    Toolpath tp;
    tp.role = PathRole::OuterWall;
    tp.kind = PathKind::NonPlanar;
    tp.layer = 7;
    tp.patch = 2;
    tp.points = {{{1, 2, 3}, {0, 0, 1}, true}, {{4, 5, 6}, {0.6, 0, 0.8}, false}};
    std::string path = temp_dir("npslice_json") + "/one.json";
    export_toolpath_json({tp}, SlicerConfig{}, path);
    auto j = nlohmann::json::parse(slurp(path));
    REQUIRE(j["paths"].size() == 1);
    auto& p = j["paths"][0];
    CHECK(p["role"] == "outer_wall");
    CHECK(p["kind"] == "nonplanar");
    CHECK(p["layer"] == 7);
    CHECK(p["patch"] == 2);
    REQUIRE(p["points"].size() == 2);
    CHECK(p["points"][0]["x"] == 1.0);
    CHECK(p["points"][1]["e"] == false);
    CHECK(p["points"][1]["nx"] == 0.6);
}

TEST_CASE("planar paths serialize patch as null") {
    Toolpath tp;
    tp.points = {{{0, 0, 0}, {0, 0, 1}, true}};
    std::string path = temp_dir("npslice_json") + "/planar.json";
    export_toolpath_json({tp}, SlicerConfig{}, path);
    auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["paths"][0]["patch"].is_null());
}

TEST_CASE("re-running the pipeline gives byte-identical toolpath json") {
    TriangleMesh mesh = small_dome();
    SlicerConfig cfg;
    std::string dir = temp_dir("npslice_det");
    PipelineResult r1 = run_pipeline(mesh, cfg, false, false);
    export_toolpath_json(r1.paths, cfg, dir + "/a.json");
    PipelineResult r2 = run_pipeline(mesh, cfg, false, false);
    export_toolpath_json(r2.paths, cfg, dir + "/b.json");
    CHECK(slurp(dir + "/a.json") == slurp(dir + "/b.json"));
    CHECK(!slurp(dir + "/a.json").empty());
}

TEST_CASE("unwritable output directory fails without partial files") {
    JobConfig job;
    job.input_path = "does-not-matter.stl";
    job.output_dir = "/proc/npslice_forbidden";
    int code = run(job);
    CHECK(code != 0);
    CHECK(!std::filesystem::exists("/proc/npslice_forbidden/toolpath.json"));
}

TEST_CASE("missing input surfaces a mesh_io error code") {
    JobConfig job;
    job.input_path = temp_dir("npslice_missing") + "/nope.stl";
    job.output_dir = temp_dir("npslice_missing_out");
    int code = run(job);
    CHECK(code == 3);
    CHECK(!std::filesystem::exists(job.output_dir + "/toolpath.json"));
}

TEST_CASE("run(): hemisphere smoke test writes both path kinds") {
    TriangleMesh dome = testmeshes::hemisphere(10, 16, 32);
    std::string dir = temp_dir("npslice_smoke");
    write_binary_stl(dome, dir + "/hemisphere.stl");
    JobConfig job;
    job.input_path = dir + "/hemisphere.stl";
    job.output_dir = dir + "/out";
    CHECK(run(job) == 0);
    auto j = nlohmann::json::parse(slurp(dir + "/out/toolpath.json"));
    bool planar = false, nonplanar = false;
    for (const auto& p : j["paths"]) {
        planar = planar || p["kind"] == "planar";
        nonplanar = nonplanar || p["kind"] == "nonplanar";
    }
    CHECK(planar);
    CHECK(nonplanar);
    CHECK(std::filesystem::exists(dir + "/out/report.json"));
    CHECK(std::filesystem::exists(dir + "/out/report.txt"));
}

TEST_CASE("paths start with a lifted non-extruding approach") {
    TriangleMesh mesh = small_dome();
    SlicerConfig cfg;
    PipelineResult result = run_pipeline(mesh, cfg, false, false);
    REQUIRE(result.paths.size() > 1);
    for (size_t i = 1; i < result.paths.size(); ++i) {
        const auto& pts = result.paths[i].points;
        REQUIRE(pts.size() >= 3);
        CHECK(!pts[0].extruding);
        CHECK(!pts[1].extruding);
        CHECK(pts[0].position.z > pts[2].position.z);  // approach comes in from above
    }
}

TEST_CASE("optional exports: svg, obj, cross sections") {
    TriangleMesh dome = testmeshes::hemisphere(8, 12, 24);
    std::string dir = temp_dir("npslice_exports");
    write_binary_stl(dome, dir + "/dome.stl");
    JobConfig job;
    job.input_path = dir + "/dome.stl";
    job.output_dir = dir + "/out";
    job.export_svg = true;
    job.export_obj = true;
    job.compute_metrics = true;
    CHECK(run(job) == 0);
    CHECK(std::filesystem::exists(job.output_dir + "/layer_0000.svg"));
    CHECK(std::filesystem::exists(job.output_dir + "/paths.obj"));
    CHECK(std::filesystem::exists(job.output_dir + "/cross_section_plane_x.txt"));
    CHECK(std::filesystem::exists(job.output_dir + "/cross_section_plane_y.txt"));
    auto j = nlohmann::json::parse(slurp(job.output_dir + "/report.json"));
    CHECK(j["cd_planar_mm"].is_number());
    CHECK(j["cd_nonplanar_mm"].is_number());
}

TEST_CASE("offset surface debug dump") {
    TriangleMesh cube = testmeshes::cube(4);
    SlicerConfig cfg;
    auto patches = extract_nonplanar_surface(cube, cfg);
    REQUIRE(!patches.empty());
    OffsetSurface s = offset_patch(cube, patches[0], -0.3);
    std::string path = temp_dir("npslice_exports") + "/surface.obj";
    write_surface_obj(s, path);
    std::string content = slurp(path);
    CHECK(content.find("v ") != std::string::npos);
    CHECK(content.find("f ") != std::string::npos);
}

TEST_CASE("config validation rejects bad parameters") {
    SlicerConfig cfg;
    cfg.layer_height = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SlicerConfig{};
    cfg.threshold_angle_deg = 95;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SlicerConfig{};
    cfg.infill_spacing = 0.2;  // below the extrusion width
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SlicerConfig{};
    cfg.wall_count = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("report json carries counts and null metrics when not requested") {
    TriangleMesh mesh = small_dome();
    SlicerConfig cfg;
    PipelineResult result = run_pipeline(mesh, cfg, false, false);
    std::string dir = temp_dir("npslice_report");
    write_report_json(result, dir + "/report.json");
    auto j = nlohmann::json::parse(slurp(dir + "/report.json"));
    CHECK(j["cd_planar_mm"].is_null());
    CHECK(j["cd_nonplanar_mm"].is_null());
    CHECK(j["patches"] == result.patch_count);
    CHECK(j["planar_layers"] == result.planar_layer_count);
    CHECK(j["nonplanar_layers"] == result.nonplanar_layer_count);
    CHECK(j["warnings"].is_array());
}
