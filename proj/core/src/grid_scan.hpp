#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvar/ext_real.hpp"

namespace lvar::detail {

/// Piece of the real line cut by a sorted grid: an open gap or a grid point.
struct Region {
  bool is_point;
  bool unbounded_left;
  bool unbounded_right;
  double lo;   // left end (gaps) or the point itself
  double hi;   // right end (gaps) or the point itself
  double rep;  // representative inside the region
};

/// Sorted union of the two inputs without duplicates.
inline std::vector<double> merge_grid(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

/// Regions in left-to-right order. Gaps too narrow to hold a distinct midpoint are dropped.
inline std::vector<Region> regions_of(const std::vector<double>& grid) {
  std::vector<Region> out;
  if (grid.empty()) {
    out.push_back({false, true, true, 0.0, 0.0, 0.0});
    return out;
  }
  const double first = grid.front();
  const double last = grid.back();
  out.push_back({false, true, false, first, first, first - std::max(1.0, std::fabs(first))});
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.push_back({true, false, false, grid[j], grid[j], grid[j]});
    if (j + 1 < grid.size()) {
      const double mid = grid[j] + (grid[j + 1] - grid[j]) / 2.0;
      if (mid > grid[j] && mid < grid[j + 1]) out.push_back({false, false, false, grid[j], grid[j + 1], mid});
    }
  }
  out.push_back({false, false, true, last, last, last + std::max(1.0, std::fabs(last))});
  return out;
}

/// Infimum of the union of regions whose representative satisfies pred.
template <class Pred>
ExtReal scan_infimum(const std::vector<double>& grid, Pred&& pred) {
  for (const Region& r : regions_of(grid)) {
    if (!pred(r.rep)) continue;
    if (r.unbounded_left) return ExtReal::neg_inf();
    return ExtReal(r.lo);
  }
  return ExtReal::pos_inf();
}

/// Supremum of the union of regions whose representative satisfies pred.
template <class Pred>
ExtReal scan_supremum(const std::vector<double>& grid, Pred&& pred) {
  const std::vector<Region> rs = regions_of(grid);
  for (auto it = rs.rbegin(); it != rs.rend(); ++it) {
    if (!pred(it->rep)) continue;
    if (it->unbounded_right) return ExtReal::pos_inf();
    return ExtReal(it->hi);
  }
  return ExtReal::neg_inf();
}

}  // namespace lvar::detail
