#include "vshape/marching_cubes.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "mc_tables.hpp"

namespace vshape {

namespace {

// Cube corner offsets in the conventional table order.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// Cube edges as corner pairs, table order.
constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                              {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriMesh marching_cubes(const SampledGrid& grid, double iso) {
  if (grid.dim != 3) throw Error("marching_cubes: grid is not 3D");
  const int nx = grid.res[0];
  const int ny = grid.res[1];
  const int nz = grid.res[2];

  // Global lattice-edge ids: x-edges, then y-edges, then z-edges.
  const std::size_t num_x = static_cast<std::size_t>(nx - 1) * ny * nz;
  const std::size_t num_y = static_cast<std::size_t>(nx) * (ny - 1) * nz;
  const std::size_t num_z = static_cast<std::size_t>(nx) * ny * (nz - 1);
  auto x_edge = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * ny + j) * (nx - 1) + i;
  };
  auto y_edge = [&](int i, int j, int k) {
    return num_x + (static_cast<std::size_t>(k) * (ny - 1) + j) * nx + i;
  };
  auto z_edge = [&](int i, int j, int k) {
    return num_x + num_y + (static_cast<std::size_t>(k) * ny + j) * nx + i;
  };

  std::vector<int> edge_vertex(num_x + num_y + num_z, -1);
  TriMesh mesh;

  // Pass 1: one vertex per sign-change edge, assigned in edge-id order.
  auto add_vertex = [&](std::size_t edge_id, double ax, double ay, double az, double va,
                        double bx, double by, double bz, double vb) {
    const double t = (iso - va) / (vb - va);
    edge_vertex[edge_id] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({ax + t * (bx - ax), ay + t * (by - ay), az + t * (bz - az)});
  };
  auto below = [&](double v) { return v < iso; };

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const double a = grid.at(i, j, k);
        const double b = grid.at(i + 1, j, k);
        if (below(a) != below(b))
          add_vertex(x_edge(i, j, k), grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), a,
                     grid.coord(0, i + 1), grid.coord(1, j), grid.coord(2, k), b);
      }
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double a = grid.at(i, j, k);
        const double b = grid.at(i, j + 1, k);
        if (below(a) != below(b))
          add_vertex(y_edge(i, j, k), grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), a,
                     grid.coord(0, i), grid.coord(1, j + 1), grid.coord(2, k), b);
      }
  for (int k = 0; k + 1 < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double a = grid.at(i, j, k);
        const double b = grid.at(i, j, k + 1);
        if (below(a) != below(b))
          add_vertex(z_edge(i, j, k), grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), a,
                     grid.coord(0, i), grid.coord(1, j), grid.coord(2, k + 1), b);
      }

  if (mesh.vertices.empty()) return mesh;

  // Local edge -> global edge id for cell (i,j,k).
  auto cell_edge = [&](int i, int j, int k, int e) -> std::size_t {
    const int* c0 = kCorner[kEdge[e][0]];
    const int* c1 = kCorner[kEdge[e][1]];
    const int x = i + std::min(c0[0], c1[0]);
    const int y = j + std::min(c0[1], c1[1]);
    const int z = k + std::min(c0[2], c1[2]);
    if (c0[0] != c1[0]) return x_edge(x, y, z);
    if (c0[1] != c1[1]) return y_edge(x, y, z);
    return z_edge(x, y, z);
  };

  auto area2 = [&](const std::array<double, 3>& a, const std::array<double, 3>& b,
                   const std::array<double, 3>& c) {
    const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    const double cx = uy * vz - uz * vy;
    const double cy = uz * vx - ux * vz;
    const double cz = ux * vy - uy * vx;
    return cx * cx + cy * cy + cz * cz;
  };

  // Pass 2: table lookup per cell, in lattice order.
  for (int k = 0; k + 1 < nz; ++k) {
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        int code = 0;
        for (int c = 0; c < 8; ++c) {
          if (below(grid.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2])))
            code |= 1 << c;
        }
        if (detail::kMcEdgeTable[code] == 0) continue;
        const int* tri = detail::kMcTriTable[code];
        for (int t = 0; tri[t] != -1; t += 3) {
          const int v0 = edge_vertex[cell_edge(i, j, k, tri[t])];
          const int v1 = edge_vertex[cell_edge(i, j, k, tri[t + 1])];
          const int v2 = edge_vertex[cell_edge(i, j, k, tri[t + 2])];
          if (v0 < 0 || v1 < 0 || v2 < 0) continue;
          if (v0 == v1 || v1 == v2 || v0 == v2) continue;
          // |cross|^2 <= (2 * 1e-12)^2 means triangle area <= 1e-12.
          if (area2(mesh.vertices[v0], mesh.vertices[v1], mesh.vertices[v2]) <= 4e-24) continue;
          mesh.triangles.push_back({v0, v1, v2});
        }
      }
    }
  }
  return mesh;
}

long euler_characteristic(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  std::set<int> used_vertices;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
    used_vertices.insert(t.begin(), t.end());
  }
  return static_cast<long>(used_vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(mesh.triangles.size());
}

bool is_closed(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 2; });
}

}  // namespace vshape
