#include "vshape/marching_squares.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vshape {

namespace {

struct EdgeVertex {
  double x = 0.0;
  double y = 0.0;
};

constexpr int kNone = -1;

double interp(double a, double b, double iso) {
  return (iso - a) / (b - a);
}

}  // namespace

Polyline2D marching_squares(const SampledGrid& grid, double iso, const Field2& field) {
  if (grid.dim != 2) throw Error("marching_squares: grid is not 2D");
  const int nx = grid.res[0];
  const int ny = grid.res[1];

  // One potential vertex per lattice edge.  Horizontal edge (i,j) joins
  // (i,j)-(i+1,j); vertical edge (i,j) joins (i,j)-(i,j+1).
  std::vector<int> h_vertex(static_cast<std::size_t>(nx - 1) * ny, kNone);
  std::vector<int> v_vertex(static_cast<std::size_t>(nx) * (ny - 1), kNone);
  std::vector<EdgeVertex> vertices;

  auto inside = [&](int i, int j) { return grid.at(i, j) >= iso; };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      if (inside(i, j) == inside(i + 1, j)) continue;
      const double t = interp(grid.at(i, j), grid.at(i + 1, j), iso);
      h_vertex[static_cast<std::size_t>(j) * (nx - 1) + i] = static_cast<int>(vertices.size());
      vertices.push_back({grid.coord(0, i) + t * grid.step(0), grid.coord(1, j)});
    }
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (inside(i, j) == inside(i, j + 1)) continue;
      const double t = interp(grid.at(i, j), grid.at(i, j + 1), iso);
      v_vertex[static_cast<std::size_t>(j) * nx + i] = static_cast<int>(vertices.size());
      vertices.push_back({grid.coord(0, i), grid.coord(1, j) + t * grid.step(1)});
    }
  }
  if (vertices.empty()) return {};

  // Cell edges 0..3: bottom, right, top, left.
  auto cell_edge_vertex = [&](int i, int j, int e) -> int {
    switch (e) {
      case 0:
        return h_vertex[static_cast<std::size_t>(j) * (nx - 1) + i];
      case 1:
        return v_vertex[static_cast<std::size_t>(j) * nx + i + 1];
      case 2:
        return h_vertex[static_cast<std::size_t>(j + 1) * (nx - 1) + i];
      default:
        return v_vertex[static_cast<std::size_t>(j) * nx + i];
    }
  };

  std::vector<std::array<int, 2>> segments;
  auto emit = [&](int i, int j, int ea, int eb) {
    segments.push_back({cell_edge_vertex(i, j, ea), cell_edge_vertex(i, j, eb)});
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      int code = 0;
      if (inside(i, j)) code |= 1;
      if (inside(i + 1, j)) code |= 2;
      if (inside(i + 1, j + 1)) code |= 4;
      if (inside(i, j + 1)) code |= 8;
      switch (code) {
        case 0:
        case 15:
          break;
        case 1:
          emit(i, j, 3, 0);
          break;
        case 2:
          emit(i, j, 0, 1);
          break;
        case 3:
          emit(i, j, 3, 1);
          break;
        case 4:
          emit(i, j, 1, 2);
          break;
        case 6:
          emit(i, j, 0, 2);
          break;
        case 7:
          emit(i, j, 3, 2);
          break;
        case 8:
          emit(i, j, 2, 3);
          break;
        case 9:
          emit(i, j, 0, 2);
          break;
        case 11:
          emit(i, j, 2, 1);
          break;
        case 12:
          emit(i, j, 1, 3);
          break;
        case 13:
          emit(i, j, 1, 0);
          break;
        case 14:
          emit(i, j, 0, 3);
          break;
        case 5:
        case 10: {
          const double cx = grid.coord(0, i) + 0.5 * grid.step(0);
          const double cy = grid.coord(1, j) + 0.5 * grid.step(1);
          const double center =
              field ? field(cx, cy)
                    : 0.25 * (grid.at(i, j) + grid.at(i + 1, j) + grid.at(i + 1, j + 1) +
                              grid.at(i, j + 1));
          const bool center_inside = center >= iso;
          if (code == 5) {
            if (center_inside) {
              emit(i, j, 0, 1);
              emit(i, j, 2, 3);
            } else {
              emit(i, j, 3, 0);
              emit(i, j, 1, 2);
            }
          } else {
            if (center_inside) {
              emit(i, j, 3, 0);
              emit(i, j, 1, 2);
            } else {
              emit(i, j, 0, 1);
              emit(i, j, 2, 3);
            }
          }
          break;
        }
        default:
          break;
      }
    }
  }

  // Chain segments into loops.  Each vertex has degree <= 2, so loops and
  // open chains are unambiguous; traversal order is fixed by segment index.
  const int nverts = static_cast<int>(vertices.size());
  std::vector<std::array<int, 2>> link(nverts, {kNone, kNone});  // segment ids per vertex
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (int end = 0; end < 2; ++end) {
      const int v = segments[s][end];
      if (v == kNone) continue;
      auto& l = link[v];
      (l[0] == kNone ? l[0] : l[1]) = static_cast<int>(s);
    }
  }

  std::vector<char> used(segments.size(), 0);
  Polyline2D out;

  auto walk = [&](std::size_t start, int from_vertex, std::vector<int>& chain) {
    // Appends vertices following segments away from from_vertex.
    std::size_t s = start;
    int v = from_vertex;
    while (true) {
      used[s] = 1;
      v = segments[s][0] == v ? segments[s][1] : segments[s][0];
      chain.push_back(v);
      const auto& l = link[v];
      int next = kNone;
      if (l[0] != kNone && !used[l[0]]) next = l[0];
      else if (l[1] != kNone && !used[l[1]]) next = l[1];
      if (next == kNone) return;
      s = static_cast<std::size_t>(next);
    }
  };

  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    if (segments[s][0] == kNone || segments[s][1] == kNone) {
      used[s] = 1;  // crossing suppressed (cannot happen with consistent codes)
      continue;
    }
    std::vector<int> forward;
    forward.push_back(segments[s][0]);
    walk(s, segments[s][0], forward);

    bool closed = forward.size() >= 3 && forward.front() == forward.back();
    std::vector<int> chain;
    if (closed) {
      chain.assign(forward.begin(), forward.end() - 1);
    } else {
      // Extend backwards from the starting vertex if it is not a dead end.
      std::vector<int> backward;
      const int v0 = forward.front();
      const auto& l = link[v0];
      int other = kNone;
      if (l[0] != kNone && !used[l[0]]) other = l[0];
      else if (l[1] != kNone && !used[l[1]]) other = l[1];
      if (other != kNone) {
        backward.push_back(v0);
        walk(static_cast<std::size_t>(other), v0, backward);
      }
      chain.assign(backward.rbegin(), backward.rend());
      if (!chain.empty()) chain.pop_back();  // drop duplicated junction vertex
      chain.insert(chain.end(), forward.begin(), forward.end());
    }

    Polyline2D::Loop loop;
    loop.closed = closed;
    for (int v : chain) {
      const auto& ev = vertices[static_cast<std::size_t>(v)];
      if (!loop.points.empty() && loop.points.back()[0] == ev.x && loop.points.back()[1] == ev.y)
        continue;  // consecutive duplicates from crossings at lattice corners
      loop.points.push_back({ev.x, ev.y});
    }
    if (loop.closed && loop.points.size() >= 2 && loop.points.front() == loop.points.back())
      loop.points.pop_back();
    if ((loop.closed && loop.points.size() >= 3) || (!loop.closed && loop.points.size() >= 2))
      out.loops.push_back(std::move(loop));
  }
  return out;
}

}  // namespace vshape
