#include "ftlink/regions.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <stdexcept>

namespace ftlink {

namespace {

constexpr std::array<int, 4> kDx{1, 0, -1, 0};
constexpr std::array<int, 4> kDy{0, 1, 0, -1};

void check(const LabelGrid& grid) {
  if (grid.rows < 0 || grid.cols < 0 ||
      grid.labels.size() != static_cast<std::size_t>(grid.rows) * grid.cols) {
    throw std::invalid_argument("label grid size does not match its dimensions");
  }
}

std::vector<GridPoint> drop_collinear(const std::vector<GridPoint>& ring) {
  std::vector<GridPoint> out;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = ring[(i + n - 1) % n];
    const auto& cur = ring[i];
    const auto& next = ring[(i + 1) % n];
    const int cross = (cur.x - prev.x) * (next.y - cur.y) - (cur.y - prev.y) * (next.x - cur.x);
    if (cross != 0) {
      out.push_back(cur);
    }
  }
  return out;
}

std::vector<std::vector<GridPoint>> trace_rings(const LabelGrid& grid, const std::vector<int>& comp,
                                                int id, const std::vector<int>& cells) {
  const int W = grid.cols + 1;
  auto inside = [&](int r, int c) {
    return r >= 0 && r < grid.rows && c >= 0 && c < grid.cols && comp[r * grid.cols + c] == id;
  };
  // Outgoing boundary edges per corner, keyed by direction.
  std::map<int, std::array<bool, 4>> out;
  std::vector<std::pair<int, int>> order;  // (vertex, dir) in discovery order
  auto add = [&](int x, int y, int dir) {
    const int v = y * W + x;
    auto& slot = out[v];
    slot[dir] = true;
    order.emplace_back(v, dir);
  };
  for (int idx : cells) {
    const int r = idx / grid.cols;
    const int c = idx % grid.cols;
    if (!inside(r - 1, c)) add(c, r, 0);
    if (!inside(r, c + 1)) add(c + 1, r, 1);
    if (!inside(r + 1, c)) add(c + 1, r + 1, 2);
    if (!inside(r, c - 1)) add(c, r + 1, 3);
  }
  std::vector<std::vector<GridPoint>> rings;
  for (const auto& [start_v, start_dir] : order) {
    if (!out[start_v][start_dir]) {
      continue;
    }
    std::vector<GridPoint> ring;
    int v = start_v;
    int dir = start_dir;
    while (true) {
      out[v][dir] = false;
      ring.push_back({v % W, v / W});
      const int nx = v % W + kDx[dir];
      const int ny = v / W + kDy[dir];
      v = ny * W + nx;
      if (v == start_v && !out[v][0] && !out[v][1] && !out[v][2] && !out[v][3]) {
        break;
      }
      auto it = out.find(v);
      int next = -1;
      for (int turn : {1, 0, 3}) {
        const int d = (dir + turn) % 4;
        if (it != out.end() && it->second[d]) {
          next = d;
          break;
        }
      }
      if (next < 0) {
        break;
      }
      dir = next;
    }
    rings.push_back(drop_collinear(ring));
  }
  return rings;
}

}  // namespace

std::vector<Region> label_regions(const LabelGrid& grid) {
  check(grid);
  const int n = grid.rows * grid.cols;
  std::vector<int> comp(n, -1);
  std::vector<Region> regions;
  for (int start = 0; start < n; ++start) {
    if (comp[start] >= 0) {
      continue;
    }
    const int id = static_cast<int>(regions.size());
    Region region;
    region.label = grid.labels[start];
    std::queue<int> queue;
    queue.push(start);
    comp[start] = id;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop();
      region.cells.push_back(cur);
      const int r = cur / grid.cols;
      const int c = cur % grid.cols;
      for (int d = 0; d < 4; ++d) {
        const int rr = r + kDy[d];
        const int cc = c + kDx[d];
        if (rr < 0 || rr >= grid.rows || cc < 0 || cc >= grid.cols) continue;
        const int nb = rr * grid.cols + cc;
        if (comp[nb] < 0 && grid.labels[nb] == region.label) {
          comp[nb] = id;
          queue.push(nb);
        }
      }
    }
    std::sort(region.cells.begin(), region.cells.end());
    regions.push_back(std::move(region));
  }
  for (int id = 0; id < static_cast<int>(regions.size()); ++id) {
    regions[id].rings = trace_rings(grid, comp, id, regions[id].cells);
  }
  return regions;
}

std::vector<Contour> label_contours(const LabelGrid& grid) {
  check(grid);
  const int W = grid.cols + 1;
  struct Edge {
    int a, b;  // corner vertices
    int la, lb;
  };
  std::vector<Edge> edges;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const int here = grid.at(r, c);
      if (c > 0 && grid.at(r, c - 1) != here) {
        const int other = grid.at(r, c - 1);
        edges.push_back({r * W + c, (r + 1) * W + c, std::min(here, other), std::max(here, other)});
      }
      if (r > 0 && grid.at(r - 1, c) != here) {
        const int other = grid.at(r - 1, c);
        edges.push_back({r * W + c, r * W + c + 1, std::min(here, other), std::max(here, other)});
      }
    }
  }
  std::map<int, std::vector<int>> incident;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    incident[edges[e].a].push_back(e);
    incident[edges[e].b].push_back(e);
  }
  std::vector<bool> used(edges.size(), false);
  auto point = [&](int v) { return GridPoint{v % W, v / W}; };

  auto walk = [&](int v, int e) {
    Contour contour;
    contour.label_a = edges[e].la;
    contour.label_b = edges[e].lb;
    contour.points.push_back(point(v));
    const int start = v;
    while (true) {
      used[e] = true;
      v = edges[e].a == v ? edges[e].b : edges[e].a;
      contour.points.push_back(point(v));
      const auto& inc = incident[v];
      if (inc.size() != 2 || v == start) {
        contour.closed = v == start;
        break;
      }
      const int next = inc[0] == e ? inc[1] : inc[0];
      if (used[next]) {
        break;
      }
      e = next;
    }
    return contour;
  };

  std::vector<Contour> contours;
  for (const auto& [v, inc] : incident) {
    if (inc.size() == 2) continue;
    for (int e : inc) {
      if (!used[e]) contours.push_back(walk(v, e));
    }
  }
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (!used[e]) contours.push_back(walk(edges[e].a, e));
  }
  return contours;
}

}  // namespace ftlink
