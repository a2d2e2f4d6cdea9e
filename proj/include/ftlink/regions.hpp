#pragma once

#include <vector>

namespace ftlink {

/// Integer labels on a rows x cols grid, row-major. Cell (r, c) covers the
/// square [c, c+1] x [r, r+1] in corner coordinates.
struct LabelGrid {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;

  int at(int r, int c) const { return labels[static_cast<std::size_t>(r) * cols + c]; }
};

struct GridPoint {
  int x = 0;  // column corner index
  int y = 0;  // row corner index
  bool operator==(const GridPoint&) const = default;
};

/// A 4-connected set of equally labelled cells and its boundary rings,
/// counter-clockwise with the region on the left. The first ring is the outer one.
struct Region {
  int label = 0;
  std::vector<int> cells;  // row-major indices, ascending
  std::vector<std::vector<GridPoint>> rings;
};

/// Polyline along cell edges separating two labels (label_a < label_b).
/// Polylines end where three or more boundary edges meet.
struct Contour {
  int label_a = 0;
  int label_b = 0;
  bool closed = false;
  std::vector<GridPoint> points;
};

std::vector<Region> label_regions(const LabelGrid& grid);
std::vector<Contour> label_contours(const LabelGrid& grid);

}  // namespace ftlink
