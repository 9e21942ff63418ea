// Command-line front end.  Subcommands: build, morph2d, morph3d,
// reconstruct, influence, warp, baseline-sdf.
//
// Exit codes: 0 success, 2 usage error, 3 I/O or format error,
// 4 numeric/solver error.  All errors print a single line to stderr with
// a greppable prefix: `vshape: error [usage|io|numeric]: ...`.
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vshape/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

int fail(const char* category, const std::string& message, int code) {
  std::cerr << "vshape: error [" << category << "]: " << message << "\n";
  return code;
}

std::vector<std::array<double, 2>> parse_path(const std::string& spec) {
  // "s0,t0:s1,t1:..."
  std::vector<std::array<double, 2>> out;
  std::istringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) {
    const auto comma = part.find(',');
    if (comma == std::string::npos)
      throw vshape::UsageError("bad --path waypoint '" + part + "', expected s,t");
    try {
      out.push_back({std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1))});
    } catch (const std::exception&) {
      throw vshape::UsageError("bad --path waypoint '" + part + "', expected s,t");
    }
  }
  if (out.empty()) throw vshape::UsageError("empty --path");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational implicit shapes: interpolation, morphing, "
               "contour reconstruction and warping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vshape::kToolVersion));

  vshape::RunConfig cfg;
  std::string kernel_name;
  std::string path_spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--kernel", kernel_name, "kernel override: r2logr, r, r3");
    sub->add_option("--seed", cfg.seed, "fixture seed (recorded in the manifest)");
    sub->add_flag("!--no-normalize", cfg.normalize,
                  "disable unit-box normalization before solving");
  };

  auto* build = app.add_subcommand("build", "solve one implicit function and save the model");
  build->add_option("--constraints", cfg.constraints_file, "constraint text file");
  build->add_option("--a", cfg.input_a, "input shape (.pgm image or .obj point cloud)");
  build->add_option("--iso", cfg.iso, "image threshold m");
  build->add_option("--offset", cfg.normal_offset, "image normal-constraint offset (pixels)");
  build->add_option("--k", cfg.point_offset, "point-cloud normal-constraint offset");
  build->add_option("--stride", cfg.stride, "keep every n-th constraint source");
  build->add_option("--out", cfg.out_file, "output model file")->required();
  add_common(build);

  auto* morph2d = app.add_subcommand("morph2d", "morph between two image shapes");
  morph2d->add_option("--a", cfg.input_a, "first shape (.pgm)")->required();
  morph2d->add_option("--b", cfg.input_b, "second shape (.pgm)")->required();
  morph2d->add_option("--frames", cfg.frames, "number of frames (>= 2)");
  morph2d->add_option("--tmax", cfg.t_max, "separation distance in the lifted dimension");
  morph2d->add_option("--res", cfg.grid_res, "extraction grid resolution");
  morph2d->add_option("--iso", cfg.iso, "image threshold m");
  morph2d->add_option("--stride", cfg.stride, "constraint thinning stride");
  morph2d->add_option("--out", cfg.out_dir, "output directory")->required();
  morph2d->add_flag("--pgm", cfg.pgm_frames, "also write rasterized PGM frames");
  add_common(morph2d);

  auto* morph3d = app.add_subcommand("morph3d", "morph between two mesh shapes");
  morph3d->add_option("--a", cfg.input_a, "first shape (.obj)")->required();
  morph3d->add_option("--b", cfg.input_b, "second shape (.obj)")->required();
  morph3d->add_option("--frames", cfg.frames, "number of frames (>= 2)");
  morph3d->add_option("--tmax", cfg.t_max, "separation distance in the lifted dimension");
  morph3d->add_option("--res", cfg.grid_res, "extraction grid resolution");
  morph3d->add_option("--k", cfg.point_offset, "normal-constraint offset");
  morph3d->add_option("--stride", cfg.stride, "vertex thinning stride");
  morph3d->add_option("--out", cfg.out_dir, "output directory")->required();
  add_common(morph3d);

  auto* reconstruct = app.add_subcommand("reconstruct", "surface from contour slices");
  reconstruct->add_option("--stack", cfg.stack_file, "slice-stack manifest")->required();
  reconstruct->add_option("--res", cfg.grid_res, "extraction grid resolution");
  reconstruct->add_option("--out", cfg.out_file, "output mesh (.obj)")->required();
  add_common(reconstruct);

  auto* influence = app.add_subcommand("influence", "three-shape blend along an (s,t) path");
  influence->add_option("--a", cfg.input_a, "shape A")->required();
  influence->add_option("--b", cfg.input_b, "shape B")->required();
  influence->add_option("--c", cfg.input_c, "influence shape C")->required();
  influence->add_option("--path", path_spec, "waypoints s0,t0:s1,t1:...")->required();
  influence->add_option("--frames", cfg.frames, "number of frames along the path");
  influence->add_option("--res", cfg.grid_res, "extraction grid resolution");
  influence->add_option("--iso", cfg.iso, "image threshold m");
  influence->add_option("--k", cfg.point_offset, "point-cloud constraint offset");
  influence->add_option("--stride", cfg.stride, "constraint thinning stride");
  influence->add_option("--out", cfg.out_dir, "output directory")->required();
  add_common(influence);

  auto* warp = app.add_subcommand("warp", "correspondence-warped morph");
  warp->add_option("--a", cfg.input_a, "first shape (.pgm)")->required();
  warp->add_option("--b", cfg.input_b, "second shape (.pgm)")->required();
  warp->add_option("--corr", cfg.corr_file, "correspondence file")->required();
  warp->add_option("--frames", cfg.frames, "number of frames");
  warp->add_option("--tmax", cfg.t_max, "separation distance");
  warp->add_option("--res", cfg.grid_res, "extraction grid resolution");
  warp->add_option("--iso", cfg.iso, "image threshold m");
  warp->add_option("--stride", cfg.stride, "constraint thinning stride");
  warp->add_option("--out", cfg.out_dir, "output directory")->required();
  add_common(warp);

  auto* baseline = app.add_subcommand("baseline-sdf", "signed-distance linear-blend baseline");
  baseline->add_option("--a", cfg.input_a, "first shape (.pgm)")->required();
  baseline->add_option("--b", cfg.input_b, "second shape (.pgm)")->required();
  baseline->add_option("--frames", cfg.frames, "number of frames");
  baseline->add_option("--iso", cfg.iso, "image threshold m");
  baseline->add_option("--out", cfg.out_dir, "output directory")->required();
  baseline->add_flag("--pgm", cfg.pgm_frames, "also write rescaled SDF PGM frames");
  add_common(baseline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::ostringstream os;
    const int rc = app.exit(e, os, os);
    (void)rc;
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!kernel_name.empty()) cfg.kernel = vshape::parse_kernel(kernel_name);
    if (!path_spec.empty()) cfg.influence_path = parse_path(path_spec);
    vshape::run_pipeline(cfg);
  } catch (const vshape::UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const vshape::IoError& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const vshape::FormatError& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const vshape::Error& e) {
    return fail("numeric", e.what(), kExitNumeric);
  } catch (const std::exception& e) {
    return fail("numeric", e.what(), kExitNumeric);
  }
  return 0;
}
