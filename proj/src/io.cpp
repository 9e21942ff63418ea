#include "vshape/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vshape {

namespace fs = std::filesystem;

int geometry_output_digits() {
  if (const char* env = std::getenv("VSHAPE_GEOM_DIGITS")) {
    const int digits = std::atoi(env);
    if (digits >= 6 && digits <= 17) return digits;
  }
  return 9;
}

namespace {

std::ifstream open_input(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

// Skips PGM whitespace and comments between header tokens.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

GrayImage load_pgm(const fs::path& path) {
  std::ifstream in = open_input(path, std::ios::binary);
  const std::string magic = next_pgm_token(in);
  if (magic != "P5")
    throw FormatError("unsupported image format: header '" + magic + "', expected binary PGM (P5)");
  const std::string w = next_pgm_token(in);
  const std::string h = next_pgm_token(in);
  const std::string maxval = next_pgm_token(in);
  int width = 0, height = 0, mv = 0;
  try {
    width = std::stoi(w);
    height = std::stoi(h);
    mv = std::stoi(maxval);
  } catch (const std::exception&) {
    throw FormatError("malformed PGM header in " + path.string());
  }
  if (mv != 255)
    throw FormatError("unsupported PGM maxval " + std::to_string(mv) + ", expected 255");
  if (width <= 0 || height <= 0) throw FormatError("invalid PGM dimensions");

  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  std::vector<unsigned char> raw(img.pixels.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw IoError("truncated PGM payload in " + path.string());
  for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i];
  return img;
}

void write_pgm(const GrayImage& img, const fs::path& path) {
  img.validate();
  std::ofstream out = open_output(path, std::ios::binary);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.pixels.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::lround(std::clamp(img.pixels[i], 0.0, 255.0)));
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_sdf_pgm(const SdfGrid& sdf, const fs::path& path) {
  double lo = 0.0, hi = 0.0;
  for (double v : sdf.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  const double scale = span > 0.0 ? 255.0 / span : 1.0;

  GrayImage img;
  img.width = sdf.width;
  img.height = sdf.height;
  img.pixels.resize(sdf.values.size());
  for (std::size_t i = 0; i < sdf.values.size(); ++i)
    img.pixels[i] = (sdf.values[i] - lo) * scale;
  write_pgm(img, path);

  std::ofstream side = open_output(fs::path(path.string() + ".scale"));
  side.precision(17);
  side << "offset " << lo << "\nscale " << scale << "\n";
}

PointNormalCloud load_obj_cloud(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<double, 3>> vns;
  std::vector<std::vector<int>> faces;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      std::array<double, 3> v{};
      if (!(ls >> v[0] >> v[1] >> v[2]))
        throw FormatError("malformed vertex at " + path.string() + ":" + std::to_string(line_no));
      verts.push_back(v);
    } else if (tag == "vn") {
      std::array<double, 3> n{};
      if (!(ls >> n[0] >> n[1] >> n[2]))
        throw FormatError("malformed normal at " + path.string() + ":" + std::to_string(line_no));
      vns.push_back(n);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string item;
      while (ls >> item) {
        // Accept v, v/vt, v//vn, v/vt/vn references.
        const int idx = std::atoi(item.c_str());
        if (idx == 0)
          throw FormatError("malformed face at " + path.string() + ":" + std::to_string(line_no));
        const int resolved = idx > 0 ? idx - 1 : static_cast<int>(verts.size()) + idx;
        if (resolved < 0 || resolved >= static_cast<int>(verts.size()))
          throw FormatError("face index out of range at " + path.string() + ":" +
                            std::to_string(line_no));
        face.push_back(resolved);
      }
      if (face.size() >= 3) faces.push_back(std::move(face));
    }
  }
  if (verts.empty()) throw EmptyShapeError("no vertices in " + path.string());

  PointNormalCloud cloud;
  for (const auto& v : verts) cloud.points.push_back(Point{v[0], v[1], v[2]});

  if (vns.size() == verts.size()) {
    for (const auto& n : vns) {
      const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      if (len <= 0.0) throw InvalidNormalError("zero-length vn record in " + path.string());
      cloud.normals.push_back(Point{n[0] / len, n[1] / len, n[2] / len});
    }
    return cloud;
  }

  // Area-weighted average of incident face normals: fan cross products
  // sum to twice the face's area vector, added once per face vertex.
  std::vector<std::array<double, 3>> acc(verts.size(), {0.0, 0.0, 0.0});
  for (const auto& face : faces) {
    std::array<double, 3> fn{0.0, 0.0, 0.0};
    for (std::size_t t = 1; t + 1 < face.size(); ++t) {
      const auto& a = verts[face[0]];
      const auto& b = verts[face[t]];
      const auto& c = verts[face[t + 1]];
      const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
      const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
      fn[0] += uy * vz - uz * vy;
      fn[1] += uz * vx - ux * vz;
      fn[2] += ux * vy - uy * vx;
    }
    for (int vi : face)
      for (int k = 0; k < 3; ++k) acc[vi][k] += fn[k];
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& n = acc[i];
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (len <= 0.0)
      throw InvalidNormalError("vertex " + std::to_string(i) + " in " + path.string() +
                               " has no incident faces to derive a normal from");
    cloud.normals.push_back(Point{n[0] / len, n[1] / len, n[2] / len});
  }
  return cloud;
}

void write_obj(const TriMesh& mesh, const fs::path& path) {
  std::ofstream out = open_output(path);
  out.precision(geometry_output_digits());
  for (const auto& v : mesh.vertices) out << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Constraint> load_constraints(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Constraint> out;
  int dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "dim") {
      if (!(ls >> dim) || dim < kMinDim || dim > kMaxDim)
        throw FormatError("bad dim header at " + path.string() + ":" + std::to_string(line_no));
      continue;
    }
    if (dim == 0)
      throw FormatError("constraint data before dim header in " + path.string());
    std::vector<double> fields;
    try {
      std::size_t used = 0;
      fields.push_back(std::stod(first, &used));
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw FormatError("bad numeric field '" + first + "' at " + path.string() + ":" +
                        std::to_string(line_no));
    }
    double v;
    while (ls >> v) fields.push_back(v);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw FormatError("expected " + std::to_string(dim + 1) + " fields at " + path.string() +
                        ":" + std::to_string(line_no) + ", got " +
                        std::to_string(fields.size()));
    Point p = Point::zero(dim);
    for (int a = 0; a < dim; ++a) p[a] = fields[a];
    out.push_back({p, fields.back()});
  }
  if (out.empty()) throw EmptyShapeError("no constraints in " + path.string());
  return out;
}

void write_constraints(const std::vector<Constraint>& constraints, const fs::path& path) {
  if (constraints.empty()) throw Error("write_constraints: empty set");
  std::ofstream out = open_output(path);
  const int dim = constraints.front().position.dim();
  out << "dim " << dim << "\n";
  out.precision(17);
  for (const auto& c : constraints) {
    for (int a = 0; a < dim; ++a) out << c.position[a] << " ";
    out << c.value << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

RbfModel load_model(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string tag;
  RbfModel model;
  std::size_t count = 0;
  std::string kernel_tag;
  if (!(in >> tag >> model.dim) || tag != "dim")
    throw FormatError("model file " + path.string() + ": expected 'dim <d>' header");
  if (!(in >> tag >> kernel_tag) || tag != "kernel")
    throw FormatError("model file " + path.string() + ": expected 'kernel <name>' header");
  if (!(in >> tag >> count) || tag != "count")
    throw FormatError("model file " + path.string() + ": expected 'count <k>' header");
  Point::check_dim(model.dim);
  model.kernel = parse_kernel(kernel_tag);
  model.centers.resize(count);
  model.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p = Point::zero(model.dim);
    for (int a = 0; a < model.dim; ++a)
      if (!(in >> p[a])) throw FormatError("model file " + path.string() + ": truncated centers");
    model.centers[i] = p;
    if (!(in >> model.weights[i]))
      throw FormatError("model file " + path.string() + ": truncated weights");
  }
  if (!(in >> tag) || tag != "poly")
    throw FormatError("model file " + path.string() + ": expected 'poly' record");
  for (int a = 0; a <= model.dim; ++a)
    if (!(in >> model.poly[a]))
      throw FormatError("model file " + path.string() + ": truncated polynomial");
  return model;
}

void write_model(const RbfModel& model, const fs::path& path) {
  std::ofstream out = open_output(path);
  out.precision(17);
  out << "dim " << model.dim << "\n";
  out << "kernel " << kernel_name(model.kernel) << "\n";
  out << "count " << model.centers.size() << "\n";
  for (std::size_t i = 0; i < model.centers.size(); ++i) {
    for (int a = 0; a < model.dim; ++a) out << model.centers[i][a] << " ";
    out << model.weights[i] << "\n";
  }
  out << "poly";
  for (int a = 0; a <= model.dim; ++a) out << " " << model.poly[a];
  out << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

CorrespondenceSet load_correspondences(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string tag;
  int dim = 0;
  std::size_t count = 0;
  if (!(in >> tag >> dim) || tag != "dim")
    throw FormatError("correspondence file " + path.string() + ": expected 'dim <d>'");
  if (!(in >> tag >> count) || tag != "count")
    throw FormatError("correspondence file " + path.string() + ": expected 'count <k>'");
  Point::check_dim(dim);
  CorrespondenceSet corr;
  for (std::size_t i = 0; i < count; ++i) {
    Point a = Point::zero(dim), b = Point::zero(dim);
    for (int ax = 0; ax < dim; ++ax)
      if (!(in >> a[ax])) throw FormatError("truncated correspondence file " + path.string());
    for (int ax = 0; ax < dim; ++ax)
      if (!(in >> b[ax])) throw FormatError("truncated correspondence file " + path.string());
    corr.a_points.push_back(a);
    corr.b_points.push_back(b);
  }
  corr.validate();
  return corr;
}

std::vector<SliceStackEntry> load_slice_stack(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<SliceStackEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    SliceStackEntry e;
    std::string file, mode;
    if (!(ls >> file)) continue;
    if (!(ls >> mode)) throw FormatError("slice stack " + path.string() + ":" +
                                         std::to_string(line_no) + ": missing placement");
    e.constraint_file = path.parent_path() / file;
    if (mode == "z") {
      e.has_z = true;
      if (!(ls >> e.z))
        throw FormatError("slice stack " + path.string() + ":" + std::to_string(line_no) +
                          ": bad z position");
    } else if (mode == "xform") {
      double m[12];
      for (double& v : m)
        if (!(ls >> v))
          throw FormatError("slice stack " + path.string() + ":" + std::to_string(line_no) +
                            ": xform needs 12 reals");
      // Row-major 3x4 [R | t]; columns of R are the images of the slice
      // axes, the fourth column is the origin.
      e.frame.axis_u = {m[0], m[4], m[8]};
      e.frame.axis_v = {m[1], m[5], m[9]};
      e.frame.origin = Point{m[3], m[7], m[11]};
      e.frame.validate();
    } else {
      throw FormatError("slice stack " + path.string() + ":" + std::to_string(line_no) +
                        ": expected 'z' or 'xform', got '" + mode + "'");
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw EmptyShapeError("no slices listed in " + path.string());
  return entries;
}

void write_polylines(const Polyline2D& contours, const fs::path& path) {
  std::ofstream out = open_output(path);
  out.precision(geometry_output_digits());
  bool first = true;
  for (const auto& loop : contours.loops) {
    if (!first) out << "\n";
    first = false;
    for (const auto& p : loop.points) out << p[0] << " " << p[1] << "\n";
    if (loop.closed && !loop.points.empty())
      out << loop.points.front()[0] << " " << loop.points.front()[1] << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace vshape
