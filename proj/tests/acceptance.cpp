// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest or directly; the CLI binary path is compiled in
// for the end-to-end determinism runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "npslice/boolean2d.hpp"
#include "npslice/export.hpp"
#include "npslice/infill.hpp"
#include "npslice/nonplanar.hpp"
#include "npslice/offset2d.hpp"
#include "npslice/pipeline.hpp"
#include "npslice/projection.hpp"
#include "npslice/slicer.hpp"
#include "npslice/surface_offset.hpp"
#include "oracles.hpp"
#include "testmeshes.hpp"

using namespace npslice;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    double budget_s;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    Criterion(const char* n, double budget) : name(n), budget_s(budget) {}

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }

    void finish() {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (dt > budget_s) {
            ok = false;
            if (detail.empty()) detail = "over time budget";
        }
        std::printf("%s %s (%.1fs/%.0fs)%s%s\n", ok ? "PASS" : "FAIL", name, dt, budget_s,
                    detail.empty() ? "" : " - ", detail.c_str());
        if (!ok) ++g_failures;
    }
};

PolygonChain chain_of(std::vector<Vec2> pts) {
    PolygonChain c;
    c.pts = std::move(pts);
    return c;
}

PolygonChain square_chain(double x0, double y0, double side) {
    return chain_of({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

double chain_perimeter(const PolygonChain& c) {
    double p = 0;
    for (size_t i = 0; i < c.pts.size(); ++i)
        p += (c.pts[(i + 1) % c.pts.size()] - c.pts[i]).norm();
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------

void criterion_1_threshold_angle() {
    Criterion c("criterion 1: threshold angle", 5);
    double th = threshold_angle(0.3, 0.4);
    c.require(std::abs(th - 36.8699) <= 1e-4, "threshold_angle(0.3,0.4) = " + std::to_string(th));
    c.finish();
}

void criterion_2_cube_slicing() {
    Criterion c("criterion 2: cube slicing oracle", 10);
    SlicerConfig cfg;

    TriangleMesh cube = testmeshes::cube(20);
    auto layers = generate_layers(cube, {}, cfg, nullptr);
    c.require(!layers.empty(), "no layers");
    for (const Layer& layer : layers) {
        if (layer.chains.size() != 1) {
            c.require(false, "layer " + std::to_string(layer.index) + " has " +
                                 std::to_string(layer.chains.size()) + " chains");
            break;
        }
        double per = chain_perimeter(layer.chains[0]);
        double area = layer.chains[0].signed_area();
        if (std::abs(per - 80.0) > 1e-6 || std::abs(area - 400.0) > 1e-6) {
            c.require(false, "layer " + std::to_string(layer.index) + " perimeter " +
                                 std::to_string(per) + " area " + std::to_string(area));
            break;
        }
    }

    TriangleMesh holed = testmeshes::cube_with_hole(20, 10, 20);
    auto hlayers = generate_layers(holed, {}, cfg, nullptr);
    c.require(!hlayers.empty(), "no layers on the holed cube");
    for (const Layer& layer : hlayers) {
        int holes = 0;
        bool orientation_ok = true;
        for (const PolygonChain& ch : layer.chains) {
            if (ch.is_hole) {
                ++holes;
                orientation_ok = orientation_ok && !ch.is_ccw();
            } else {
                orientation_ok = orientation_ok && ch.is_ccw();
            }
        }
        if (holes != 1 || !orientation_ok) {
            c.require(false,
                      "layer " + std::to_string(layer.index) + " holes=" + std::to_string(holes));
            break;
        }
    }
    c.finish();
}

void criterion_3_sorting_robustness() {
    Criterion c("criterion 3: sorting robustness", 10);
    // 100-segment closed section of an irregular but valid polygon.
    std::vector<Segment2> segs;
    int n = 100;
    auto vertex = [n](int i) {
        double a = 2 * kPi * (i % n) / n;
        double r = 10 + 2 * std::sin(5 * a) + std::cos(3 * a);
        return Vec2{r * std::cos(a), r * std::sin(a)};
    };
    for (int i = 0; i < n; ++i) segs.push_back({vertex(i), vertex(i + 1)});

    auto reference = sort_segments(segs);
    c.require(reference.size() == 1 && reference[0].closed, "reference chain malformed");

    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 500 && c.ok; ++trial) {
        auto shuffled = segs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (auto& s : shuffled)
            if (rng() & 1) std::swap(s.a, s.b);
        auto chains = sort_segments(shuffled);
        bool same = chains.size() == 1 && chains[0].closed &&
                    chains[0].pts.size() == reference[0].pts.size();
        if (same)
            for (size_t i = 0; i < chains[0].pts.size(); ++i)
                same = same && chains[0].pts[i] == reference[0].pts[i];
        c.require(same, "trial " + std::to_string(trial) + " diverged");
    }
    c.finish();
}

std::vector<Region> offset_test_polygons() {
    std::vector<Region> out;
    // Convex.
    out.push_back({square_chain(0, 0, 6)});
    out.push_back({chain_of({{0, 0}, {8, 0}, {8, 4}, {0, 4}})});
    out.push_back({chain_of({{0, 0}, {6, 0}, {0, 5}})});
    out.push_back({chain_of({{2, 0}, {6, 0}, {8, 3}, {6, 6}, {2, 6}, {0, 3}})});
    out.push_back({chain_of({{0, 0}, {5, -1}, {7, 2}, {5, 6}, {1, 5}})});
    // L-shapes.
    out.push_back({chain_of({{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 6}, {0, 6}})});
    out.push_back({chain_of({{0, 0}, {8, 0}, {8, 3}, {5, 3}, {5, 7}, {0, 7}})});
    out.push_back({chain_of({{0, 0}, {5, 0}, {5, 5}, {3.5, 5}, {3.5, 1.5}, {0, 1.5}})});
    out.push_back({chain_of({{0, 0}, {7, 0}, {7, 6}, {4, 6}, {4, 2}, {0, 2}})});
    out.push_back({chain_of({{0, 0}, {6, 0}, {6, 6}, {4.5, 6}, {4.5, 1.35}, {0, 1.35}})});
    // U-shapes.
    out.push_back({chain_of({{0, 0}, {6, 0}, {6, 6}, {4, 6}, {4, 2}, {2, 2}, {2, 6}, {0, 6}})});
    out.push_back(
        {chain_of({{0, 0}, {8, 0}, {8, 5}, {5.5, 5}, {5.5, 1.5}, {2.5, 1.5}, {2.5, 5}, {0, 5}})});
    out.push_back(
        {chain_of({{0, 0}, {7, 0}, {7, 7}, {4.6, 7}, {4.6, 4}, {2.4, 4}, {2.4, 7}, {0, 7}})});
    out.push_back({chain_of({{0, 0}, {9, 0}, {9, 4}, {6, 4}, {6, 1.3}, {3, 1.3}, {3, 4}, {0, 4}})});
    out.push_back(
        {chain_of({{0, 0}, {6, 0}, {6, 5}, {3.8, 5}, {3.8, 0.9}, {2.2, 0.9}, {2.2, 5}, {0, 5}})});
    // Dumbbells with varying neck width.
    auto dumbbell = [](double neck) {
        double y0 = 1 - neck / 2, y1 = 1 + neck / 2;
        return chain_of({{0, -1}, {2, -1}, {2, y0}, {3, y0}, {3, -1}, {5, -1},
                         {5, 3}, {3, 3}, {3, y1}, {2, y1}, {2, 3}, {0, 3}});
    };
    for (double neck : {0.3, 0.5, 0.8, 1.3, 2.0}) out.push_back({dumbbell(neck)});
    // With holes.
    for (auto pair : {std::pair<double, double>{6, 2}, {7, 3}, {8, 1.6}}) {
        Region r{square_chain(0, 0, pair.first),
                 square_chain(pair.first / 2 - pair.second / 2, pair.first / 2 - pair.second / 2,
                              pair.second)};
        identify_holes(r);
        out.push_back(r);
    }
    {
        Region r{chain_of({{0, 0}, {9, 0}, {9, 6}, {0, 6}}), square_chain(1.5, 1.5, 2),
                 square_chain(5.5, 2.5, 2)};
        identify_holes(r);
        out.push_back(r);
    }
    {
        Region r{chain_of({{0, 0}, {8, 0}, {8, 3}, {4, 3}, {4, 8}, {0, 8}}),
                 square_chain(1, 4.5, 1.6)};
        identify_holes(r);
        out.push_back(r);
    }
    return out;
}

void criterion_4_offsets() {
    Criterion c("criterion 4: straight-skeleton offsets vs distance field", 30);
    auto polygons = offset_test_polygons();
    c.require(polygons.size() == 25, "expected 25 bundled polygons");
    int idx = 0;
    for (const Region& region : polygons) {
        for (double d : {0.2, 0.6}) {
            Region off = ss_offset(region, d);
            auto oracle = oracles::distance_field_offset_boundary(region, d, 0.01);
            double h = oracles::hausdorff_chains_points(off, oracle);
            if (h > 0.02) {
                c.require(false, "polygon " + std::to_string(idx) + " d=" + std::to_string(d) +
                                     " hausdorff " + std::to_string(h));
            }
            // Exhaustive proper segment-pair crossing audit.
            std::vector<Segment2> segs;
            for (const auto& ch : off)
                for (size_t i = 0; i < ch.pts.size(); ++i)
                    segs.push_back({ch.pts[i], ch.pts[(i + 1) % ch.pts.size()]});
            for (size_t i = 0; i < segs.size() && c.ok; ++i)
                for (size_t j = i + 1; j < segs.size(); ++j)
                    if (segments_properly_cross(segs[i].a, segs[i].b, segs[j].a, segs[j].b, 1e-9)) {
                        c.require(false, "self-intersection in polygon " + std::to_string(idx));
                        break;
                    }
        }
        ++idx;
    }
    c.finish();
}

void criterion_5_decomposition() {
    Criterion c("criterion 5: monotone decomposition", 30);
    std::mt19937 rng(811);

    auto check_region = [&](const Region& region, double angle, int tag) {
        double area = std::abs(region_area(region));
        auto polys = decompose_monotone(region, angle);
        double sum = 0;
        for (const auto& mp : polys) {
            PolygonChain ch;
            ch.pts = mp.pts;
            sum += std::abs(ch.signed_area());
            std::vector<Vec2> rotated(mp.pts.size());
            for (size_t i = 0; i < mp.pts.size(); ++i) rotated[i] = rotate(mp.pts[i], -angle);
            if (!oracles::monotone_by_probes(rotated, 1000 + tag, 1000)) {
                c.require(false, "polygon " + std::to_string(tag) + " sub-polygon not monotone");
                return;
            }
        }
        if (area > 1e-9)
            c.require(std::abs(sum - area) <= 1e-6 * area,
                      "polygon " + std::to_string(tag) + " area sum " + std::to_string(sum) +
                          " vs " + std::to_string(area));
    };

    // 200 random rectilinear polygons: top and bottom staircases.
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        std::uniform_int_distribution<int> colsd(4, 12);
        std::uniform_real_distribution<double> hd(0.5, 4.0);
        int cols = colsd(rng);
        std::vector<Vec2> pts;
        pts.push_back({0, 0});
        for (int i = 0; i < cols; ++i) {
            double bottom = -hd(rng);
            pts.push_back({static_cast<double>(i), bottom});
            pts.push_back({static_cast<double>(i + 1), bottom});
        }
        pts.push_back({static_cast<double>(cols), 0});
        for (int i = cols; i > 0; --i) {
            double top = 5.0 + hd(rng);
            pts.push_back({static_cast<double>(i), top});
            pts.push_back({static_cast<double>(i - 1), top});
        }
        PolygonChain ch;
        ch.pts = pts;
        if (!ch.is_ccw()) ch.reverse();
        check_region({ch}, 0.0, trial);
    }

    // 50 random simple (star-shaped) polygons with rotated sweep directions.
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        std::uniform_int_distribution<int> nd(8, 16);
        std::uniform_real_distribution<double> rd(1.0, 5.0);
        std::uniform_real_distribution<double> ad(0.0, 180.0);
        int n = nd(rng);
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            double a = 2 * kPi * i / n;
            double r = rd(rng);
            pts.push_back({r * std::cos(a), r * std::sin(a)});
        }
        PolygonChain ch;
        ch.pts = pts;
        if (!ch.is_ccw()) ch.reverse();
        check_region({ch}, ad(rng), 200 + trial);
    }
    c.finish();
}

void criterion_6_zigzag() {
    Criterion c("criterion 6: zigzag passes", 5);
    MonotonePolygon sq;
    sq.pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    InfillPath path = zigzag(sq, 0.25, 0.0);
    c.require(path.polyline.size() == 6, "unit square pass count");
    if (c.ok) {
        c.require(path.polyline[0].y == 0.25 && path.polyline[2].y == 0.5 &&
                      path.polyline[4].y == 0.75,
                  "pass ordinates not exact");
        c.require(path.polyline[0].x == 0.0 && path.polyline[1].x == 1.0 &&
                      path.polyline[2].x == 1.0 && path.polyline[3].x == 0.0 &&
                      path.polyline[4].x == 0.0 && path.polyline[5].x == 1.0,
                  "serpentine direction");
    }

    MonotonePolygon tri;
    tri.pts = {{0, 0}, {1, 0}, {0, 1}};
    InfillPath tp = zigzag(tri, 0.25, 0.0);
    bool found[3] = {false, false, false};
    for (const Vec2& p : tp.polyline) {
        if (std::abs(p.y - 0.25) < 1e-9 && std::abs(p.x - 0.75) < 1e-9) found[0] = true;
        if (std::abs(p.y - 0.5) < 1e-9 && std::abs(p.x - 0.5) < 1e-9) found[1] = true;
        if (std::abs(p.y - 0.75) < 1e-9 && std::abs(p.x - 0.25) < 1e-9) found[2] = true;
    }
    c.require(found[0] && found[1] && found[2], "triangle pass extents");
    c.finish();
}

void criterion_7_projection() {
    Criterion c("criterion 7: barycentric identities and conformity sweep", 10);

    Vec2 a{0.3, 0.2}, b{2.1, 0.4}, cc{0.9, 1.8};
    auto [s0, t0] = barycentric(a, a, b, cc);
    auto [s1, t1] = barycentric(b, a, b, cc);
    auto [s2, t2] = barycentric((a + b + cc) / 3.0, a, b, cc);
    c.require(std::abs(s0) < 1e-12 && std::abs(t0) < 1e-12, "identity at v0");
    c.require(std::abs(s1 - 1) < 1e-12 && std::abs(t1) < 1e-12, "identity at v1");
    c.require(std::abs(s2 - 1.0 / 3) < 1e-12 && std::abs(t2 - 1.0 / 3) < 1e-12, "centroid");

    {
        OffsetSurface s;
        s.vertices = {{0, 0, 0}, {10, 0, 10}, {10, 10, 10}, {0, 10, 0}};
        s.triangles = {{0, 1, 2}, {0, 2, 3}};
        s.vertex_normals.assign(4, {0, 0, 1});
        for (const auto& tri : s.triangles)
            s.facet_normals.push_back((s.vertices[tri[1]] - s.vertices[tri[0]])
                                          .cross(s.vertices[tri[2]] - s.vertices[tri[0]])
                                          .normalized());
        s.source_vertex = {0, 1, 2, 3};
        SurfaceLocator loc(s);
        ToolpathPoint tp = project_point({2, 7}, loc);
        c.require(std::abs(tp.position.z - 2.0) < 1e-12, "slanted lift z=x");
    }

    // Conformity sweep on the bundled spherical-cap mesh: every wall/infill
    // vertex and every 0.01 mm interior sample of extruding segments.
    TriangleMesh dome = testmeshes::hemisphere(20, 40, 80);
    SlicerConfig cfg;
    auto patches = extract_nonplanar_surface(dome, cfg);
    c.require(patches.size() == 1, "cap patch extraction");
    if (c.ok) {
        std::vector<std::string> warnings;
        auto surfaces = interior_layer_surfaces(dome, patches[0], cfg, &warnings);
        auto paths = generate_nonplanar_layers(surfaces, 0, cfg, 0, &warnings);
        c.require(!paths.empty(), "no non-planar paths generated");
        double worst = 0;
        long checked = 0;
        for (size_t si = 0; si < surfaces.size() && c.ok; ++si) {
            oracles::LiftGrid lift(surfaces[si].vertices, surfaces[si].triangles);
            for (const Toolpath& tp : paths) {
                if (tp.layer != static_cast<int>(si)) continue;
                for (size_t i = 0; i < tp.points.size(); ++i) {
                    bool arriving_extrude = tp.points[i].extruding || i == 0;
                    if (arriving_extrude) {
                        double d = lift.vertical_distance(tp.points[i].position);
                        worst = std::max(worst, d);
                        ++checked;
                    }
                    if (i + 1 < tp.points.size() && tp.points[i + 1].extruding &&
                        tp.points[i].extruding) {
                        Vec3 p = tp.points[i].position;
                        Vec3 q = tp.points[i + 1].position;
                        double len = (q - p).norm();
                        int steps = std::max(1, static_cast<int>(len / 0.01));
                        for (int k = 1; k < steps; ++k) {
                            Vec3 x = p + (q - p) * (static_cast<double>(k) / steps);
                            worst = std::max(worst, lift.vertical_distance(x));
                            ++checked;
                        }
                    }
                }
            }
        }
        char buf[120];
        std::snprintf(buf, sizeof(buf), "worst %.2e over %ld samples", worst, checked);
        c.require(worst <= 1e-6 && checked > 10000, buf);
        if (c.ok) c.detail = buf;
    }
    c.finish();
}

void criterion_8_subtraction() {
    Criterion c("criterion 8: planar-only subtraction", 10);
    TriangleMesh mesh = testmeshes::steep_dome_on_plate();
    SlicerConfig cfg;
    auto patches = extract_nonplanar_surface(mesh, cfg);
    c.require(!patches.empty(), "no patches on the dome");
    std::vector<std::string> warnings;
    std::vector<TriangleMesh> spaces;
    for (auto& p : patches) {
        PatchStack stack = build_patch_stack(mesh, p, cfg, &warnings);
        if (stack.effective_layers == 0) continue;
        c.require(stack.space.is_watertight(), "space not watertight");
        spaces.push_back(std::move(stack.space));
    }
    c.require(!spaces.empty(), "no spaces built");

    auto layers = generate_layers(mesh, spaces, cfg, &warnings);
    double worst = 0;
    for (const Layer& layer : layers) {
        if (layer.chains.empty()) continue;
        double z = slice_plane_z(cfg, layer.index);
        for (const TriangleMesh& space : spaces) {
            Box3 bb = space.bbox();
            if (z < bb.lo.z - 1e-9 || z > bb.hi.z + 1e-9) continue;
            Region cut = section_chains(space, z);
            if (cut.empty()) continue;
            worst = std::max(worst, region_intersection_area(layer.chains, cut));
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max overlap %.2e mm^2", worst);
    c.require(worst < 1e-6, buf);
    if (c.ok) c.detail = buf;
    c.finish();
}

void criterion_9_accuracy() {
    Criterion c("criterion 9: accuracy headline on the freeform dome", 60);
    TriangleMesh mesh = testmeshes::freeform_dome();
    SlicerConfig cfg;  // h = 0.3, w = 0.4
    PipelineResult r = run_pipeline(mesh, cfg, false, true);
    c.require(r.has_metrics, "metrics missing");
    if (c.ok) {
        double pl = r.metrics.cd_planar_mm, np = r.metrics.cd_nonplanar_mm;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "cd_planar=%.4f cd_nonplanar=%.4f ratio=%.2f", pl, np,
                      pl / np);
        c.require(np < pl, std::string("nonplanar not better: ") + buf);
        c.require(pl / np >= 4.0, std::string("ratio below 4: ") + buf);
        c.require(np <= 0.05, std::string("nonplanar above 0.05: ") + buf);
        if (c.ok) c.detail = buf;
    }
    c.finish();
}

void criterion_10_determinism() {
    Criterion c("criterion 10: end-to-end determinism", 60);
    namespace fs = std::filesystem;
    std::string base = (fs::temp_directory_path() / "npslice_acceptance").string();
    fs::create_directories(base);

    struct Case {
        const char* name;
        TriangleMesh mesh;
    };
    std::vector<Case> cases;
    cases.push_back({"dome", testmeshes::freeform_dome()});
    cases.push_back({"mouse", testmeshes::mouse_shell()});
    cases.push_back({"twodome", testmeshes::two_domes()});

    for (auto& cs : cases) {
        if (!c.ok) break;
        std::string stl = base + "/" + cs.name + ".stl";
        write_binary_stl(cs.mesh, stl);
        std::string out1 = base + "/" + cs.name + "_run1";
        std::string out2 = base + "/" + cs.name + "_run2";
        for (const std::string& out : {out1, out2}) {
            std::string cmd = std::string("\"") + NPSLICE_CLI_PATH + "\" slice \"" + stl +
                              "\" -o \"" + out + "\" 2>/dev/null";
            int rc = std::system(cmd.c_str());
            c.require(rc == 0, std::string(cs.name) + " CLI run failed");
        }
        if (c.ok) {
            std::string a = slurp(out1 + "/toolpath.json");
            std::string b = slurp(out2 + "/toolpath.json");
            c.require(!a.empty() && a == b, std::string(cs.name) + " runs differ");
        }
    }

    if (c.ok) {
        std::string out = base + "/dome_planar";
        std::string cmd = std::string("\"") + NPSLICE_CLI_PATH + "\" slice \"" + base +
                          "/dome.stl\" --force-planar -o \"" + out + "\" 2>/dev/null";
        c.require(std::system(cmd.c_str()) == 0, "force-planar run failed");
        if (c.ok) {
            auto j = nlohmann::json::parse(slurp(out + "/toolpath.json"));
            bool any_nonplanar = false;
            for (const auto& p : j["paths"]) any_nonplanar = any_nonplanar || p["kind"] == "nonplanar";
            c.require(!any_nonplanar, "force-planar produced non-planar paths");
            c.require(!j["paths"].empty(), "force-planar produced no paths");
        }
    }
    c.finish();
}

void criterion_11_flat_top() {
    Criterion c("criterion 11: flat-top sanity", 10);
    TriangleMesh box = testmeshes::box({0, 0, 0}, {40, 40, 6});
    SlicerConfig cfg;
    PipelineResult r = run_pipeline(box, cfg, false, true);
    c.require(r.has_metrics, "metrics missing");
    if (c.ok) {
        char buf[120];
        std::snprintf(buf, sizeof(buf), "cd_planar=%.4f cd_nonplanar=%.4f", r.metrics.cd_planar_mm,
                      r.metrics.cd_nonplanar_mm);
        c.require(r.metrics.cd_planar_mm <= 0.01, std::string("planar: ") + buf);
        c.require(r.metrics.cd_nonplanar_mm <= 0.01, std::string("nonplanar: ") + buf);
        if (c.ok) c.detail = buf;
    }
    c.finish();
}

} // namespace

int main() {
    criterion_1_threshold_angle();
    criterion_2_cube_slicing();
    criterion_3_sorting_robustness();
    criterion_4_offsets();
    criterion_5_decomposition();
    criterion_6_zigzag();
    criterion_7_projection();
    criterion_8_subtraction();
    criterion_9_accuracy();
    criterion_10_determinism();
    criterion_11_flat_top();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
