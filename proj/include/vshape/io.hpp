// File formats: binary PGM images, OBJ meshes, and the text formats for
// constraint sets, solved models, correspondences, slice-stack manifests
// and extracted contours.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vshape/constraints.hpp"
#include "vshape/geometry.hpp"
#include "vshape/model.hpp"
#include "vshape/slice_recon.hpp"
#include "vshape/warp.hpp"

namespace vshape {

// Number of significant digits for geometry output (OBJ, contours).
// Overridable through the VSHAPE_GEOM_DIGITS environment variable (6..17).
int geometry_output_digits();

// --- images (binary PGM, P5, maxval 255, bit-exact round trip) ---
GrayImage load_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

// SDF visualization: linear rescale to [0,255] with the scale factor
// recorded in a sidecar text file `<path>.scale`.
void write_sdf_pgm(const SdfGrid& sdf, const std::filesystem::path& path);

// --- meshes (OBJ, v/vn/f records, 1-based indices) ---
// When vn records are absent, per-vertex normals are computed as
// area-weighted averages of incident face normals.
PointNormalCloud load_obj_cloud(const std::filesystem::path& path);
void write_obj(const TriMesh& mesh, const std::filesystem::path& path);

// --- constraint sets ---
// Header line `dim <d>`, then one constraint per line: d coordinates and
// a value.  `#` comments and blank lines are ignored.
std::vector<Constraint> load_constraints(const std::filesystem::path& path);
void write_constraints(const std::vector<Constraint>& constraints,
                       const std::filesystem::path& path);

// --- solved models ---
// Text header (dim, kernel, count), then one line per center with its
// weight, then the polynomial coefficients; 17 significant digits for an
// exact round trip.
RbfModel load_model(const std::filesystem::path& path);
void write_model(const RbfModel& model, const std::filesystem::path& path);

// --- correspondences: header `dim <d> count <k>`, then k lines of 2d reals ---
CorrespondenceSet load_correspondences(const std::filesystem::path& path);

// --- slice stacks ---
// One slice per line: `<constraint file> z <pos>` or
// `<constraint file> xform <12 reals>` (3x4 rigid transform, row-major).
struct SliceStackEntry {
  std::filesystem::path constraint_file;
  bool has_z = false;
  double z = 0.0;
  SliceFrame frame;
};
std::vector<SliceStackEntry> load_slice_stack(const std::filesystem::path& path);

// --- contours: `x y` per line, loops separated by blank lines; closed
// loops repeat their first vertex at the end ---
void write_polylines(const Polyline2D& contours, const std::filesystem::path& path);

}  // namespace vshape
