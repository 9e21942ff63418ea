#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "support/fixtures.hpp"
#include "vshape/io.hpp"
#include "vshape/pipeline.hpp"

using namespace vshape;
namespace fs = std::filesystem;
using vshape::testing::disk_image;
using vshape::testing::ring_image;
using vshape::testing::TestRng;
using vshape::testing::x_image;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("vshape_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VSHAPE_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string run_cli_stderr(const std::string& args) {
  TempDir tmp;
  const fs::path errfile = tmp / "stderr.txt";
  const std::string cmd =
      std::string(VSHAPE_CLI_PATH) + " " + args + " 2>" + errfile.string();
  (void)std::system(cmd.c_str());
  return read_bytes(errfile);
}

}  // namespace

TEST_CASE("pgm: 2x2 payload order and bit-exact round trip") {
  TempDir tmp;
  const fs::path p = tmp / "tiny.pgm";
  {
    std::ofstream out(p, std::ios::binary);
    out << "P5\n2 2\n255\n";
    const unsigned char bytes[4] = {0, 255, 128, 64};
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  const GrayImage img = load_pgm(p);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(0, 0) == 0.0);
  CHECK(img.at(1, 0) == 255.0);
  CHECK(img.at(0, 1) == 128.0);
  CHECK(img.at(1, 1) == 64.0);

  const GrayImage big = x_image(64);
  const fs::path a = tmp / "a.pgm";
  const fs::path b = tmp / "b.pgm";
  write_pgm(big, a);
  write_pgm(load_pgm(a), b);
  CHECK(read_bytes(a) == read_bytes(b));
}

TEST_CASE("pgm: unsupported formats and truncation") {
  TempDir tmp;
  const fs::path p2 = tmp / "ascii.pgm";
  std::ofstream(p2) << "P2\n2 2\n255\n0 1 2 3\n";
  CHECK_THROWS_AS(load_pgm(p2), FormatError);

  const fs::path p6 = tmp / "color.ppm";
  std::ofstream(p6) << "P6\n1 1\n255\nabc";
  CHECK_THROWS_AS(load_pgm(p6), FormatError);

  const fs::path deep = tmp / "deep.pgm";
  std::ofstream(deep) << "P5\n2 2\n65535\nabcd";
  CHECK_THROWS_AS(load_pgm(deep), FormatError);

  const fs::path trunc = tmp / "trunc.pgm";
  std::ofstream(trunc) << "P5\n4 4\n255\nxy";
  CHECK_THROWS_AS(load_pgm(trunc), IoError);
}

TEST_CASE("obj: vn passthrough and derived cube normals") {
  TempDir tmp;
  const fs::path tri = tmp / "tri.obj";
  std::ofstream(tri) << "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                     << "vn 0 0 1\nvn 0 0 1\nvn 0 0 1\n"
                     << "f 1//1 2//2 3//3\n";
  const PointNormalCloud cloud = load_obj_cloud(tri);
  REQUIRE(cloud.points.size() == 3);
  for (const auto& n : cloud.normals) {
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 0.0);
    CHECK(n[2] == 1.0);
  }

  // Unit cube without vn: corner normals are (+-1,+-1,+-1)/sqrt(3).
  const fs::path cube = tmp / "cube.obj";
  {
    std::ofstream out(cube);
    for (int i = 0; i < 8; ++i)
      out << "v " << (i & 1) << " " << ((i >> 1) & 1) << " " << ((i >> 2) & 1) << "\n";
    // Faces with outward orientation, quads as written by many exporters.
    out << "f 1 3 4 2\n"   // z = 0, normal (0,0,-1)
        << "f 5 6 8 7\n"   // z = 1
        << "f 1 2 6 5\n"   // y = 0
        << "f 3 7 8 4\n"   // y = 1
        << "f 1 5 7 3\n"   // x = 0
        << "f 2 4 8 6\n";  // x = 1
  }
  const PointNormalCloud c = load_obj_cloud(cube);
  REQUIRE(c.points.size() == 8);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i < 8; ++i) {
    for (int ax = 0; ax < 3; ++ax) {
      const double expected = (c.points[i][ax] > 0.5 ? 1.0 : -1.0) * inv_sqrt3;
      CHECK(c.normals[i][ax] == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  const fs::path empty = tmp / "empty.obj";
  std::ofstream(empty) << "# nothing\n";
  CHECK_THROWS_AS(load_obj_cloud(empty), EmptyShapeError);

  const fs::path bad = tmp / "bad.obj";
  std::ofstream(bad) << "v 0 0 0\nf 1 2 3\n";
  CHECK_THROWS_AS(load_obj_cloud(bad), FormatError);
}

TEST_CASE("constraints file: header, comments, round trip") {
  TempDir tmp;
  const fs::path p = tmp / "cons.txt";
  std::ofstream(p) << "# sample\ndim 2\n0.5 0.5 0\n0.25 0.75 1 # inline\n\n1 0 0.5\n";
  const auto cons = load_constraints(p);
  REQUIRE(cons.size() == 3);
  CHECK(cons[0].position.dim() == 2);
  CHECK(cons[1].value == 1.0);
  CHECK(cons[2].position[0] == 1.0);

  TestRng rng(19);
  std::vector<Constraint> original;
  for (int i = 0; i < 7; ++i) original.push_back({rng.point(3, -2.0, 2.0), rng.uniform(-1, 1)});
  const fs::path rt = tmp / "rt.txt";
  write_constraints(original, rt);
  const auto loaded = load_constraints(rt);
  REQUIRE(loaded.size() == original.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].value == original[i].value);  // 17 digits: exact
    for (int a = 0; a < 3; ++a) CHECK(loaded[i].position[a] == original[i].position[a]);
  }

  const fs::path nohdr = tmp / "nohdr.txt";
  std::ofstream(nohdr) << "0.5 0.5 0\n";
  CHECK_THROWS_AS(load_constraints(nohdr), FormatError);

  const fs::path badfields = tmp / "badfields.txt";
  std::ofstream(badfields) << "dim 2\n0.5 0.5 0 7\n";
  CHECK_THROWS_AS(load_constraints(badfields), FormatError);
}

TEST_CASE("model file: exact round trip") {
  TestRng rng(21);
  std::vector<Constraint> cons;
  for (int i = 0; i < 9; ++i) cons.push_back({rng.point(2, 0.0, 1.0), rng.uniform(0.0, 1.0)});
  const RbfModel model = solve_model(cons, Kernel::thin_plate);

  TempDir tmp;
  const fs::path p = tmp / "model.txt";
  write_model(model, p);
  const RbfModel loaded = load_model(p);
  CHECK(loaded.dim == model.dim);
  CHECK(loaded.kernel == model.kernel);
  REQUIRE(loaded.weights.size() == model.weights.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    CHECK(loaded.weights[i] == model.weights[i]);  // bit-exact at 17 digits
    CHECK(loaded.centers[i] == model.centers[i]);
  }
  for (int a = 0; a <= model.dim; ++a) CHECK(loaded.poly[a] == model.poly[a]);

  TestRng probe(22);
  for (int i = 0; i < 20; ++i) {
    const Point x = probe.point(2, -0.5, 1.5);
    CHECK(loaded.evaluate(x) == model.evaluate(x));
  }
}

TEST_CASE("correspondence file parsing") {
  TempDir tmp;
  const fs::path p = tmp / "corr.txt";
  std::ofstream(p) << "dim 2 count 3\n0 0 1 0\n1 0 2 0\n0 1 1 1\n";
  const CorrespondenceSet corr = load_correspondences(p);
  REQUIRE(corr.a_points.size() == 3);
  CHECK(corr.a_points[1] == Point{1.0, 0.0});
  CHECK(corr.b_points[1] == Point{2.0, 0.0});

  const fs::path trunc = tmp / "trunc.txt";
  std::ofstream(trunc) << "dim 2 count 3\n0 0 1 0\n";
  CHECK_THROWS_AS(load_correspondences(trunc), FormatError);
}

TEST_CASE("slice stack manifest parsing") {
  TempDir tmp;
  write_constraints({{Point{0.0, 0.0}, 0.0}, {Point{1.0, 0.0}, 0.0}, {Point{0.0, 1.0}, 1.0}},
                    tmp / "s0.txt");
  const fs::path p = tmp / "stack.txt";
  std::ofstream(p) << "# two slices\n"
                   << "s0.txt z 0.0\n"
                   << "s0.txt xform 1 0 0 0  0 0 -1 0  0 1 0 2\n";
  const auto entries = load_slice_stack(p);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].has_z);
  CHECK(entries[0].z == 0.0);
  CHECK(!entries[1].has_z);
  CHECK(entries[1].frame.origin == Point{0.0, 0.0, 2.0});
  CHECK(entries[1].frame.axis_u == std::array<double, 3>{1.0, 0.0, 0.0});
  CHECK(entries[1].frame.axis_v == std::array<double, 3>{0.0, 0.0, 1.0});

  const fs::path bad = tmp / "bad.txt";
  std::ofstream(bad) << "s0.txt sideways 1\n";
  CHECK_THROWS_AS(load_slice_stack(bad), FormatError);
}

TEST_CASE("polyline output format") {
  Polyline2D contours;
  contours.loops.push_back({{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, true});
  contours.loops.push_back({{{5.0, 5.0}, {6.0, 5.0}}, false});
  TempDir tmp;
  const fs::path p = tmp / "loops.txt";
  write_polylines(contours, p);
  const std::string text = read_bytes(p);
  CHECK(text ==
        "0 0\n1 0\n1 1\n0 0\n"  // closed loop repeats its first vertex
        "\n"
        "5 5\n6 5\n");
}

TEST_CASE("pipeline: build from image and reload the model") {
  TempDir tmp;
  write_pgm(disk_image(64, 31.5, 31.5, 14.0), tmp / "disk.pgm");

  RunConfig cfg;
  cfg.subcommand = "build";
  cfg.input_a = tmp / "disk.pgm";
  cfg.out_file = tmp / "model.txt";
  cfg.stride = 2;
  const RunManifest manifest = run_pipeline(cfg);
  CHECK(manifest.max_residual <= 1e-6);
  CHECK(manifest.min_pivot > 0.0);
  CHECK(fs::exists(tmp / "model.txt"));
  CHECK(fs::exists(tmp / "manifest.json"));

  const RbfModel model = load_model(tmp / "model.txt");
  CHECK(model.dim == 2);
  CHECK(model.evaluate({31.5, 31.5}) > 0.0);  // inside the disk
  CHECK(model.evaluate({2.0, 2.0}) < 0.0);    // outside
}

TEST_CASE("pipeline: morph2d determinism, byte-identical geometry") {
  TempDir tmp;
  write_pgm(x_image(64), tmp / "x.pgm");
  write_pgm(ring_image(64, 31.5, 31.5, 12.0, 22.0), tmp / "o.pgm");

  auto run = [&](const std::string& dir) {
    RunConfig cfg;
    cfg.subcommand = "morph2d";
    cfg.input_a = tmp / "x.pgm";
    cfg.input_b = tmp / "o.pgm";
    cfg.out_dir = tmp / dir;
    cfg.frames = 4;
    cfg.grid_res = 65;
    cfg.stride = 3;
    return run_pipeline(cfg);
  };
  const RunManifest m1 = run("run1");
  const RunManifest m2 = run("run2");
  REQUIRE(m1.outputs.size() == 4);
  for (int f = 0; f < 4; ++f) {
    const std::string name = "frame_00" + std::to_string(f) + ".txt";
    const std::string b1 = read_bytes(tmp / "run1" / name);
    CHECK(!b1.empty());
    CHECK(b1 == read_bytes(tmp / "run2" / name));
  }
}

TEST_CASE("pipeline: reconstruct from a slice-stack manifest") {
  TempDir tmp;
  // Three circular slices of a barrel.
  for (int s = 0; s < 3; ++s) {
    const auto set = vshape::testing::circle_constraints(0.0, 0.0, s == 1 ? 0.5 : 0.4, 16, 0.02);
    write_constraints(set.all(), tmp / ("slice" + std::to_string(s) + ".txt"));
  }
  std::ofstream(tmp / "stack.txt") << "slice0.txt z 0\nslice1.txt z 0.35\nslice2.txt z 0.7\n";

  RunConfig cfg;
  cfg.subcommand = "reconstruct";
  cfg.stack_file = tmp / "stack.txt";
  cfg.out_file = tmp / "mesh.obj";
  cfg.grid_res = 25;
  const RunManifest manifest = run_pipeline(cfg);
  CHECK(manifest.max_residual <= 1e-6);
  CHECK(fs::exists(tmp / "mesh.obj"));
  const std::string obj = read_bytes(tmp / "mesh.obj");
  CHECK(obj.find("v ") != std::string::npos);
  CHECK(obj.find("f ") != std::string::npos);
}

TEST_CASE("pipeline: config validation") {
  RunConfig cfg;
  cfg.subcommand = "morph2d";
  cfg.frames = 1;
  CHECK_THROWS_AS(run_pipeline(cfg), UsageError);
  cfg.frames = 8;
  cfg.t_max = 0.0;
  CHECK_THROWS_AS(run_pipeline(cfg), UsageError);
  cfg.t_max = 1.0;
  cfg.subcommand = "nonsense";
  CHECK_THROWS_AS(run_pipeline(cfg), UsageError);
}

TEST_CASE("manifest json is deterministic apart from timings") {
  TempDir tmp;
  write_pgm(disk_image(32, 15.5, 15.5, 8.0), tmp / "d.pgm");
  RunConfig cfg;
  cfg.subcommand = "build";
  cfg.input_a = tmp / "d.pgm";
  cfg.out_file = tmp / "m.txt";
  const RunManifest m1 = run_pipeline(cfg);
  const RunManifest m2 = run_pipeline(cfg);
  auto strip_timings = [](std::string s) {
    const auto at = s.find("\"timings_ms\"");
    const auto end = s.find('}', at);
    s.erase(at, end - at + 1);
    return s;
  };
  CHECK(strip_timings(m1.to_json()) == strip_timings(m2.to_json()));
}

TEST_CASE("cli: exit codes and greppable error prefixes") {
  TempDir tmp;
  write_pgm(disk_image(32, 15.5, 15.5, 8.0), tmp / "d.pgm");

  // 0: success with --version.
  CHECK(run_cli("--version") == 0);

  // 2: usage errors (unknown flag, missing required, bad numeric range).
  CHECK(run_cli("morph2d --bogus") == 2);
  CHECK(run_cli("morph2d") == 2);
  CHECK(run_cli("morph2d --a " + (tmp / "d.pgm").string() + " --b " + (tmp / "d.pgm").string() +
                " --out " + (tmp / "out").string() + " --frames 1") == 2);

  // 3: I/O errors (missing file).
  CHECK(run_cli("build --a /nonexistent/x.pgm --out " + (tmp / "m.txt").string()) == 3);

  // 4: numeric errors (constant image has no crossings... EmptyShape is numeric).
  GrayImage flat;
  flat.width = flat.height = 16;
  flat.pixels.assign(256, 100.0);
  write_pgm(flat, tmp / "flat.pgm");
  CHECK(run_cli("build --a " + (tmp / "flat.pgm").string() + " --out " +
                (tmp / "m.txt").string()) == 4);

  const std::string err = run_cli_stderr("build --a /nonexistent/x.pgm --out /tmp/m.txt");
  CHECK(err.find("vshape: error [io]") != std::string::npos);
  const std::string usage_err = run_cli_stderr("morph2d --bogus");
  CHECK(usage_err.find("vshape: error [usage]") != std::string::npos);
}

TEST_CASE("cli: full morph2d run produces frames and manifest") {
  TempDir tmp;
  write_pgm(disk_image(48, 23.5, 23.5, 10.0), tmp / "a.pgm");
  write_pgm(disk_image(48, 23.5, 23.5, 16.0), tmp / "b.pgm");
  const int rc = run_cli("morph2d --a " + (tmp / "a.pgm").string() + " --b " +
                         (tmp / "b.pgm").string() + " --out " + (tmp / "frames").string() +
                         " --frames 3 --res 49 --stride 2 --pgm");
  CHECK(rc == 0);
  CHECK(fs::exists(tmp / "frames" / "frame_000.txt"));
  CHECK(fs::exists(tmp / "frames" / "frame_002.txt"));
  CHECK(fs::exists(tmp / "frames" / "frame_001.pgm"));
  CHECK(fs::exists(tmp / "frames" / "manifest.json"));
}
