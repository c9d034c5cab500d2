#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "monorare/geometry.hpp"
#include "monorare/rng.hpp"

namespace testsupport {

using monorare::Point;
using monorare::SplitMix64;

// Brute-force lower-orthant union volume on a regular grid of cell centers.
// Independent of the sweepline code path; O(cells * vertices).
inline double grid_volume(const std::vector<Point>& vertices, int dimension,
                          int cells_per_axis) {
  if (vertices.empty()) return 0.0;
  long total = 1;
  for (int d = 0; d < dimension; ++d) total *= cells_per_axis;
  long inside = 0;
  Point x(static_cast<std::size_t>(dimension));
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int d = 0; d < dimension; ++d) {
      const long cell = rem % cells_per_axis;
      rem /= cells_per_axis;
      x[static_cast<std::size_t>(d)] =
          (static_cast<double>(cell) + 0.5) / cells_per_axis;
    }
    for (const Point& v : vertices) {
      bool in = true;
      for (int d = 0; d < dimension; ++d) {
        if (x[static_cast<std::size_t>(d)] > v[static_cast<std::size_t>(d)]) {
          in = false;
          break;
        }
      }
      if (in) {
        ++inside;
        break;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(total);
}

inline Point random_point(int dimension, SplitMix64& rng) {
  Point x(static_cast<std::size_t>(dimension));
  for (auto& c : x) c = rng.next_unit();
  return x;
}

inline std::vector<Point> random_vertices(int dimension, int count,
                                          SplitMix64& rng) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_point(dimension, rng));
  return out;
}

// A random comparable pair x <= y, built by shrinking/growing a base point.
inline std::pair<Point, Point> comparable_pair(int dimension, SplitMix64& rng) {
  Point lo = random_point(dimension, rng);
  Point hi = lo;
  for (auto& c : hi) c += (1.0 - c) * rng.next_unit();
  return {lo, hi};
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace testsupport
