// Extracted geometry containers.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace vshape {

struct Polyline2D {
  struct Loop {
    std::vector<std::array<double, 2>> points;
    bool closed = false;
  };
  std::vector<Loop> loops;

  bool empty() const { return loops.empty(); }
  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& l : loops) n += l.points.size();
    return n;
  }
};

struct TriMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

// V - E + F with E the number of distinct undirected edges.
long euler_characteristic(const TriMesh& mesh);

// True when every edge is shared by exactly two triangles.
bool is_closed(const TriMesh& mesh);

}  // namespace vshape
