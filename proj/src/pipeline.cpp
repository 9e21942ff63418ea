#include "vshape/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "vshape/constraints.hpp"
#include "vshape/io.hpp"
#include "vshape/marching_cubes.hpp"
#include "vshape/marching_squares.hpp"
#include "vshape/model.hpp"
#include "vshape/morph.hpp"
#include "vshape/slice_recon.hpp"
#include "vshape/warp.hpp"

namespace vshape {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (frames < 2) throw UsageError("frames must be >= 2");
  if (grid_res < 2) throw UsageError("grid resolution must be >= 2");
  if (!(t_max > 0.0)) throw UsageError("tmax must be positive");
  if (!(normal_offset > 0.0)) throw UsageError("normal offset must be positive");
  if (!(point_offset > 0.0)) throw UsageError("point offset k must be positive");
  if (stride < 1) throw UsageError("stride must be >= 1");
}

namespace {

class StageRunner {
 public:
  explicit StageRunner(RunManifest& manifest) : manifest_(manifest) {}

  template <typename F>
  auto run(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, start);
      } else {
        auto result = f();
        record(stage, start);
        return result;
      }
    } catch (const Error&) {
      rethrow_prefixed(stage);
    } catch (const std::exception& e) {
      throw Error(stage + ": " + e.what());
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const auto end = std::chrono::steady_clock::now();
    manifest_.timings.push_back(
        {stage, std::chrono::duration<double, std::milli>(end - start).count()});
  }

  [[noreturn]] void rethrow_prefixed(const std::string& stage) {
    try {
      throw;
    } catch (const DuplicateCenterError& e) {
      throw DuplicateCenterError(stage + ": " + e.what(), e.first, e.second);
    } catch (const SingularSystemError& e) {
      throw SingularSystemError(stage + ": " + e.what(), e.pivot_index, e.pivot_magnitude);
    } catch (const UsageError& e) {
      throw UsageError(stage + ": " + e.what());
    } catch (const IoError& e) {
      throw IoError(stage + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(stage + ": " + e.what());
    } catch (const EmptyShapeError& e) {
      throw EmptyShapeError(stage + ": " + e.what());
    } catch (const Error& e) {
      throw Error(stage + ": " + e.what());
    }
  }

  RunManifest& manifest_;
};

std::string frame_name(int index, const char* ext) {
  std::ostringstream os;
  os << "frame_" << (index < 10 ? "00" : index < 100 ? "0" : "") << index << ext;
  return os.str();
}

bool is_pgm(const fs::path& p) { return p.extension() == ".pgm"; }

ConstraintSet load_shape_2d(const fs::path& path, const RunConfig& cfg) {
  const GrayImage img = load_pgm(path);
  ImageConstraintOptions opt;
  opt.normal_offset = cfg.normal_offset;
  opt.stride = cfg.stride;
  return image_to_constraints(img, cfg.iso, opt);
}

ConstraintSet load_shape_3d(const fs::path& path, const RunConfig& cfg) {
  const PointNormalCloud cloud = load_obj_cloud(path);
  PointNormalCloud thinned;
  for (std::size_t i = 0; i < cloud.points.size(); i += cfg.stride) {
    thinned.points.push_back(cloud.points[i]);
    thinned.normals.push_back(cloud.normals[i]);
  }
  return points_normals_to_constraints(thinned, cfg.point_offset);
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.normalize = cfg.normalize;
  return o;
}

// --tmax is expressed in units of the shapes' bounding-box extent: the
// separating distance is the local/global control knob and only means
// anything relative to the shape scale.
double separation_distance(const RunConfig& cfg, const ConstraintSet& a,
                           const ConstraintSet& b) {
  std::vector<Point> pts;
  for (const auto* set : {&a, &b}) {
    for (const auto& c : set->boundary) pts.push_back(c.position);
    for (const auto& c : set->normal) pts.push_back(c.position);
  }
  const double extent = bounding_box(pts).max_extent();
  return cfg.t_max * (extent > 0.0 ? extent : 1.0);
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
}

void write_frame_pgm(const Field2& field, const Box& bounds, int res, const fs::path& path) {
  const SampledGrid g = sample_grid(field, bounds, {res, res});
  GrayImage img;
  img.width = res;
  img.height = res;
  img.pixels.resize(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) img.pixels[i] = g.values[i] >= 0.0 ? 255 : 0;
  write_pgm(img, path);
}

void record_solve(RunManifest& manifest, const SolveStats& stats) {
  manifest.system_size = stats.system_size;
  manifest.min_pivot = stats.min_pivot;
  manifest.max_residual = stats.max_residual;
}

// --- subcommand bodies ---

void run_build(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  std::vector<Constraint> constraints;
  if (!cfg.constraints_file.empty()) {
    constraints = stages.run("load-constraints",
                             [&] { return load_constraints(cfg.constraints_file); });
  } else if (!cfg.input_a.empty() && is_pgm(cfg.input_a)) {
    const ConstraintSet set =
        stages.run("constraint-gen", [&] { return load_shape_2d(cfg.input_a, cfg); });
    constraints = set.all();
  } else if (!cfg.input_a.empty()) {
    const ConstraintSet set =
        stages.run("constraint-gen", [&] { return load_shape_3d(cfg.input_a, cfg); });
    constraints = set.all();
  } else {
    throw UsageError("build: provide --constraints, or --a with an image or mesh");
  }
  manifest.constraint_counts.push_back({"total", constraints.size()});

  SolveStats stats;
  const Kernel kernel =
      cfg.kernel ? *cfg.kernel : default_kernel(constraints.front().position.dim());
  const RbfModel model = stages.run(
      "solve", [&] { return solve_model(constraints, kernel, solve_options(cfg), &stats); });
  record_solve(manifest, stats);

  const fs::path out = cfg.out_file.empty() ? fs::path("model.txt") : cfg.out_file;
  stages.run("write", [&] { write_model(model, out); });
  manifest.outputs.push_back(out);
}

void run_morph2d(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  const ConstraintSet a =
      stages.run("constraint-gen-a", [&] { return load_shape_2d(cfg.input_a, cfg); });
  const ConstraintSet b =
      stages.run("constraint-gen-b", [&] { return load_shape_2d(cfg.input_b, cfg); });
  manifest.constraint_counts.push_back({"a", a.size()});
  manifest.constraint_counts.push_back({"b", b.size()});

  SolveStats stats;
  const Kernel kernel = cfg.kernel ? *cfg.kernel : default_kernel(3);
  const double t_max = separation_distance(cfg, a, b);
  const MorphModel morph = stages.run("solve", [&] {
    return build_morph(a, b, t_max, kernel, solve_options(cfg), &stats);
  });
  record_solve(manifest, stats);

  const FrameGrid grid = default_frame_grid(a, b, cfg.grid_res);
  const auto frames =
      stages.run("extract", [&] { return morph_sequence(morph, cfg.frames, grid); });

  ensure_out_dir(cfg.out_dir);
  stages.run("write", [&] {
    for (int f = 0; f < cfg.frames; ++f) {
      const fs::path out = cfg.out_dir / frame_name(f, ".txt");
      write_polylines(frames[f], out);
      manifest.outputs.push_back(out);
      if (cfg.pgm_frames) {
        const double t = morph.t_max * f / (cfg.frames - 1);
        const fs::path pgm = cfg.out_dir / frame_name(f, ".pgm");
        write_frame_pgm(slice2(morph, t), grid.bounds, cfg.grid_res, pgm);
        manifest.outputs.push_back(pgm);
      }
    }
  });
}

void run_morph3d(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  const ConstraintSet a =
      stages.run("constraint-gen-a", [&] { return load_shape_3d(cfg.input_a, cfg); });
  const ConstraintSet b =
      stages.run("constraint-gen-b", [&] { return load_shape_3d(cfg.input_b, cfg); });
  manifest.constraint_counts.push_back({"a", a.size()});
  manifest.constraint_counts.push_back({"b", b.size()});

  SolveStats stats;
  const Kernel kernel = cfg.kernel ? *cfg.kernel : default_kernel(4);
  const double t_max = separation_distance(cfg, a, b);
  const MorphModel morph = stages.run("solve", [&] {
    return build_morph(a, b, t_max, kernel, solve_options(cfg), &stats);
  });
  record_solve(manifest, stats);

  const FrameGrid grid = default_frame_grid(a, b, cfg.grid_res);
  ensure_out_dir(cfg.out_dir);
  stages.run("extract", [&] {
    for (int f = 0; f < cfg.frames; ++f) {
      const double t = morph.t_max * f / (cfg.frames - 1);
      const SampledGrid samples =
          sample_grid(slice3(morph, t), grid.bounds, {grid.res, grid.res, grid.res});
      const TriMesh mesh = marching_cubes(samples, 0.0);
      const fs::path out = cfg.out_dir / frame_name(f, ".obj");
      write_obj(mesh, out);
      manifest.outputs.push_back(out);
    }
  });
}

void run_reconstruct(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  const auto entries = stages.run("load-stack", [&] { return load_slice_stack(cfg.stack_file); });

  ConstraintSet combined;
  double max_spacing = 0.0;
  stages.run("place", [&] {
    const bool all_z = std::all_of(entries.begin(), entries.end(),
                                   [](const SliceStackEntry& e) { return e.has_z; });
    if (all_z) {
      std::vector<ConstraintSet> slices;
      std::vector<double> spacings;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        ConstraintSet set;
        set.dim = 2;
        for (const Constraint& c : load_constraints(entries[i].constraint_file)) {
          if (c.position.dim() != 2)
            throw DimensionMismatchError("slice constraints must be 2D");
          (c.value == 0.0 ? set.boundary : set.normal).push_back(c);
        }
        slices.push_back(std::move(set));
        if (i > 0) {
          const double gap = entries[i].z - entries[i - 1].z;
          if (!(gap > 0.0)) throw Error("slice z positions must be strictly increasing");
          spacings.push_back(gap);
          max_spacing = std::max(max_spacing, gap);
        }
      }
      combined = stack_parallel(slices, spacings);
      // stack_parallel assigns cumulative z from 0; restore the absolute
      // base position of the first slice.
      const double z0 = entries.front().z;
      for (auto& c : combined.boundary) c.position[2] += z0;
      for (auto& c : combined.normal) c.position[2] += z0;
    } else {
      std::vector<OrientedSlice> slices;
      for (const auto& e : entries) {
        OrientedSlice s;
        if (e.has_z) {
          s.frame.origin = Point{0.0, 0.0, e.z};
        } else {
          s.frame = e.frame;
        }
        s.constraints.dim = 2;
        for (const Constraint& c : load_constraints(e.constraint_file)) {
          if (c.position.dim() != 2)
            throw DimensionMismatchError("slice constraints must be 2D");
          (c.value == 0.0 ? s.constraints.boundary : s.constraints.normal).push_back(c);
        }
        slices.push_back(std::move(s));
      }
      combined = place_oriented(slices);
    }
  });
  manifest.constraint_counts.push_back({"combined", combined.size()});

  SolveStats stats;
  const Kernel kernel = cfg.kernel ? *cfg.kernel : default_kernel(3);
  const ReconstructResult result = stages.run("solve", [&] {
    return reconstruct(combined, kernel, cfg.grid_res, max_spacing, solve_options(cfg), &stats);
  });
  record_solve(manifest, stats);

  const fs::path out = cfg.out_file.empty() ? fs::path("mesh.obj") : cfg.out_file;
  stages.run("write", [&] { write_obj(result.mesh, out); });
  manifest.outputs.push_back(out);
}

void run_influence(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  if (cfg.influence_path.empty())
    throw UsageError("influence: --path with at least one s,t waypoint is required");
  const bool two_d = is_pgm(cfg.input_a);
  auto load = [&](const fs::path& p) {
    return two_d ? load_shape_2d(p, cfg) : load_shape_3d(p, cfg);
  };
  const ConstraintSet a = stages.run("constraint-gen-a", [&] { return load(cfg.input_a); });
  const ConstraintSet b = stages.run("constraint-gen-b", [&] { return load(cfg.input_b); });
  const ConstraintSet c = stages.run("constraint-gen-c", [&] { return load(cfg.input_c); });
  manifest.constraint_counts.push_back({"a", a.size()});
  manifest.constraint_counts.push_back({"b", b.size()});
  manifest.constraint_counts.push_back({"c", c.size()});

  const ConstraintSet lifted = embed_influence(a, b, c);
  SolveStats stats;
  const Kernel kernel = cfg.kernel ? *cfg.kernel : default_kernel(lifted.dim);
  const RbfModel model = stages.run(
      "solve", [&] { return solve_model(lifted.all(), kernel, solve_options(cfg), &stats); });
  record_solve(manifest, stats);

  // Sample the (s, t) path uniformly by waypoint parameter.
  std::vector<std::array<double, 2>> samples;
  if (cfg.frames == static_cast<int>(cfg.influence_path.size())) {
    samples = cfg.influence_path;
  } else {
    const auto& wp = cfg.influence_path;
    for (int f = 0; f < cfg.frames; ++f) {
      const double u = wp.size() == 1
                           ? 0.0
                           : static_cast<double>(f) / (cfg.frames - 1) * (wp.size() - 1);
      const std::size_t seg = std::min(static_cast<std::size_t>(u), wp.size() - 2);
      const double frac = wp.size() == 1 ? 0.0 : u - seg;
      samples.push_back({wp[seg][0] + frac * (wp[seg + 1][0] - wp[seg][0]),
                         wp[seg][1] + frac * (wp[seg + 1][1] - wp[seg][1])});
    }
  }

  const FrameGrid grid = default_frame_grid(a, b, cfg.grid_res);
  ensure_out_dir(cfg.out_dir);
  stages.run("extract", [&] {
    for (std::size_t f = 0; f < samples.size(); ++f) {
      const auto [s, t] = std::pair{samples[f][0], samples[f][1]};
      if (two_d) {
        const Field2 field = influence_slice2(model, s, t);
        const SampledGrid g = sample_grid(field, grid.bounds, {grid.res, grid.res});
        const fs::path out = cfg.out_dir / frame_name(static_cast<int>(f), ".txt");
        write_polylines(marching_squares(g, 0.0, field), out);
        manifest.outputs.push_back(out);
      } else {
        const Field3 field = influence_slice3(model, s, t);
        const SampledGrid g =
            sample_grid(field, grid.bounds, {grid.res, grid.res, grid.res});
        const fs::path out = cfg.out_dir / frame_name(static_cast<int>(f), ".obj");
        write_obj(marching_cubes(g, 0.0), out);
        manifest.outputs.push_back(out);
      }
    }
  });
}

void run_warp(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  const ConstraintSet a =
      stages.run("constraint-gen-a", [&] { return load_shape_2d(cfg.input_a, cfg); });
  const ConstraintSet b =
      stages.run("constraint-gen-b", [&] { return load_shape_2d(cfg.input_b, cfg); });
  const CorrespondenceSet corr =
      stages.run("load-correspondences", [&] { return load_correspondences(cfg.corr_file); });
  manifest.constraint_counts.push_back({"a", a.size()});
  manifest.constraint_counts.push_back({"b", b.size()});
  manifest.constraint_counts.push_back({"correspondences", corr.a_points.size()});

  const Kernel kernel = cfg.kernel ? *cfg.kernel : default_kernel(3);
  const FrameGrid grid = default_frame_grid(a, b, cfg.grid_res);
  const double t_max = separation_distance(cfg, a, b);
  const auto frames = stages.run("solve", [&] {
    return warped_morph(a, b, corr, t_max, kernel, cfg.frames, grid, solve_options(cfg));
  });

  ensure_out_dir(cfg.out_dir);
  stages.run("write", [&] {
    for (int f = 0; f < cfg.frames; ++f) {
      const fs::path out = cfg.out_dir / frame_name(f, ".txt");
      write_polylines(frames[f], out);
      manifest.outputs.push_back(out);
    }
  });
}

void run_baseline_sdf(const RunConfig& cfg, RunManifest& manifest, StageRunner& stages) {
  const GrayImage img_a = stages.run("load-a", [&] { return load_pgm(cfg.input_a); });
  const GrayImage img_b = stages.run("load-b", [&] { return load_pgm(cfg.input_b); });

  const SdfGrid sdf_a =
      stages.run("sdf-a", [&] { return signed_distance_field(img_a, cfg.iso); });
  const SdfGrid sdf_b =
      stages.run("sdf-b", [&] { return signed_distance_field(img_b, cfg.iso); });

  ensure_out_dir(cfg.out_dir);
  stages.run("write", [&] {
    for (int f = 0; f < cfg.frames; ++f) {
      const double alpha = static_cast<double>(f) / (cfg.frames - 1);
      const SdfGrid frame = sdf_morph_baseline(sdf_a, sdf_b, alpha);

      SampledGrid g;
      g.dim = 2;
      g.bounds = Box{Point{0.0, 0.0},
                     Point{static_cast<double>(frame.width - 1),
                           static_cast<double>(frame.height - 1)}};
      g.res = {frame.width, frame.height, 1};
      g.values = frame.values;
      const fs::path out = cfg.out_dir / frame_name(f, ".txt");
      write_polylines(marching_squares(g, 0.0), out);
      manifest.outputs.push_back(out);
      if (cfg.pgm_frames) {
        const fs::path pgm = cfg.out_dir / frame_name(f, ".pgm");
        write_sdf_pgm(frame, pgm);
        manifest.outputs.push_back(pgm);
      }
    }
  });
}

}  // namespace

std::string RunManifest::to_json() const {
  ordered_json j;
  j["tool"] = kToolVersion;
  ordered_json cfg;
  cfg["subcommand"] = config.subcommand;
  auto put_path = [&](const char* key, const fs::path& p) {
    if (!p.empty()) cfg[key] = p.string();
  };
  put_path("a", config.input_a);
  put_path("b", config.input_b);
  put_path("c", config.input_c);
  put_path("constraints", config.constraints_file);
  put_path("corr", config.corr_file);
  put_path("stack", config.stack_file);
  put_path("out_dir", config.out_dir);
  put_path("out_file", config.out_file);
  if (config.kernel) cfg["kernel"] = kernel_name(*config.kernel);
  cfg["tmax"] = config.t_max;
  cfg["frames"] = config.frames;
  cfg["grid_res"] = config.grid_res;
  cfg["iso"] = config.iso;
  cfg["normal_offset"] = config.normal_offset;
  cfg["point_offset"] = config.point_offset;
  cfg["stride"] = config.stride;
  cfg["normalize"] = config.normalize;
  cfg["seed"] = config.seed;
  j["config"] = cfg;

  ordered_json counts;
  for (const auto& [name, count] : constraint_counts) counts[name] = count;
  j["constraint_counts"] = counts;
  j["system_size"] = system_size;
  j["min_pivot"] = min_pivot;
  j["max_residual"] = max_residual;

  ordered_json times;
  for (const auto& t : timings) times[t.stage] = t.milliseconds;
  j["timings_ms"] = times;

  ordered_json outs = ordered_json::array();
  for (const auto& o : outputs) outs.push_back(o.string());
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

RunManifest run_pipeline(const RunConfig& config) {
  config.validate();
  RunManifest manifest;
  manifest.config = config;
  StageRunner stages(manifest);

  if (config.subcommand == "build") {
    run_build(config, manifest, stages);
  } else if (config.subcommand == "morph2d") {
    run_morph2d(config, manifest, stages);
  } else if (config.subcommand == "morph3d") {
    run_morph3d(config, manifest, stages);
  } else if (config.subcommand == "reconstruct") {
    run_reconstruct(config, manifest, stages);
  } else if (config.subcommand == "influence") {
    run_influence(config, manifest, stages);
  } else if (config.subcommand == "warp") {
    run_warp(config, manifest, stages);
  } else if (config.subcommand == "baseline-sdf") {
    run_baseline_sdf(config, manifest, stages);
  } else {
    throw UsageError("unknown subcommand: " + config.subcommand);
  }

  const fs::path manifest_path =
      config.out_dir.empty() ? (config.out_file.empty() ? fs::path("manifest.json")
                                                        : config.out_file.parent_path() /
                                                              "manifest.json")
                             : config.out_dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write manifest " + manifest_path.string());
  out << manifest.to_json();
  return manifest;
}

}  // namespace vshape
