#include "monorare/volume.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "monorare/rng.hpp"

namespace monorare {

namespace {

// 2-d staircase of maximal points (x ascending, y descending) with the area
// of the covered lower-left region maintained incrementally. Used to obtain
// all suffix areas of the 3-d sweep in one pass.
class Staircase2D {
 public:
  void reserve(std::size_t n) { pts_.reserve(n); }

  double area() const { return area_; }

  void insert(double a, double b) {
    auto pos_it = std::lower_bound(
        pts_.begin(), pts_.end(), a,
        [](const std::pair<double, double>& p, double v) { return p.first < v; });
    std::size_t pos = static_cast<std::size_t>(pos_it - pts_.begin());
    if (pos < pts_.size() && pts_[pos].second >= b) return;  // dominated

    // Elements covered by (a,b): x == a at pos (if any, its y < b here),
    // plus the run left of pos with y <= b.
    std::size_t hi = pos;
    if (hi < pts_.size() && pts_[hi].first == a) ++hi;
    std::size_t lo = pos;
    while (lo > 0 && pts_[lo - 1].second <= b) --lo;

    const double x_left = (lo > 0) ? pts_[lo - 1].first : 0.0;
    double removed = 0.0;
    double prev_x = x_left;
    for (std::size_t j = lo; j < hi; ++j) {
      removed += pts_[j].second * (pts_[j].first - prev_x);
      prev_x = pts_[j].first;
    }
    if (hi < pts_.size()) {
      removed += pts_[hi].second * (pts_[hi].first - prev_x);
      area_ += pts_[hi].second * (pts_[hi].first - a);
    }
    area_ += b * (a - x_left) - removed;

    if (hi > lo) {
      pts_[lo] = {a, b};
      pts_.erase(pts_.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                 pts_.begin() + static_cast<std::ptrdiff_t>(hi));
    } else {
      pts_.insert(pts_.begin() + static_cast<std::ptrdiff_t>(lo), {a, b});
    }
  }

 private:
  std::vector<std::pair<double, double>> pts_;
  double area_ = 0.0;
};

double vol1(const std::vector<std::vector<double>>& pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, p[0]);
  return m;
}

// Sort on the first coordinate, then sweep with the suffix maximum of the
// second: each slab (x_{j-1}, x_j] is covered up to the tallest vertex at or
// right of j. This is the "force i to the maximal component" branch of the
// recursion, unrolled.
double vol2(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  double suffix_max = 0.0;
  for (std::size_t j = pts.size(); j-- > 0;) {
    suffix_max = std::max(suffix_max, pts[j].second);
    pts[j].second = suffix_max;
  }
  double total = 0.0;
  double prev = 0.0;
  for (const auto& [x, y] : pts) {
    total += (x - prev) * y;
    prev = x;
  }
  return total;
}

// Sweep the third coordinate bottom-up; the suffix of vertices above each
// slab is accumulated into an incremental staircase whose area is the
// 2-d slice volume.
double vol3(std::vector<std::array<double, 3>>& pts) {
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a[2] < b[2]; });
  Staircase2D st;
  st.reserve(pts.size());
  double total = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    st.insert(pts[i][0], pts[i][1]);
    const double z_lo = (i > 0) ? pts[i - 1][2] : 0.0;
    total += st.area() * (pts[i][2] - z_lo);
  }
  return total;
}

// Keep only vertices that are maximal under the coordinatewise order.
void prune_dominated(std::vector<std::vector<double>>& pts) {
  std::vector<std::vector<double>> kept;
  kept.reserve(pts.size());
  for (auto& cand : pts) {
    bool covered = false;
    for (const auto& k : kept) {
      covered = true;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        if (k[c] < cand[c]) {
          covered = false;
          break;
        }
      }
      if (covered) break;
    }
    if (covered) continue;
    std::erase_if(kept, [&](const std::vector<double>& k) {
      for (std::size_t c = 0; c < cand.size(); ++c) {
        if (cand[c] < k[c]) return false;
      }
      return true;
    });
    kept.push_back(std::move(cand));
  }
  pts = std::move(kept);
}

double vol_rec(std::vector<std::vector<double>> pts, int d) {
  if (pts.empty()) return 0.0;
  if (d == 1) return vol1(pts);
  if (d == 2) {
    std::vector<std::pair<double, double>> flat;
    flat.reserve(pts.size());
    for (const auto& p : pts) flat.emplace_back(p[0], p[1]);
    return vol2(std::move(flat));
  }
  if (d == 3) {
    std::vector<std::array<double, 3>> flat;
    flat.reserve(pts.size());
    for (const auto& p : pts) flat.push_back({p[0], p[1], p[2]});
    return vol3(flat);
  }

  const int z = d - 1;
  std::sort(pts.begin(), pts.end(),
            [z](const auto& a, const auto& b) { return a[z] < b[z]; });
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double z_lo = (i > 0) ? pts[i - 1][z] : 0.0;
    const double width = pts[i][z] - z_lo;
    if (width <= 0.0) continue;
    std::vector<std::vector<double>> slice;
    slice.reserve(pts.size() - i);
    for (std::size_t j = i; j < pts.size(); ++j) {
      slice.emplace_back(pts[j].begin(), pts[j].begin() + z);
    }
    prune_dominated(slice);
    total += width * vol_rec(std::move(slice), d - 1);
  }
  return total;
}

}  // namespace

double klee_volume(std::vector<Point> vertices, int dimension) {
  if (dimension < 1) throw std::invalid_argument("klee_volume: dimension < 1");
  for (const auto& v : vertices) validate_unit_point(v, dimension);
  if (vertices.empty()) return 0.0;
  std::vector<std::vector<double>> pts(vertices.begin(), vertices.end());
  return vol_rec(std::move(pts), dimension);
}

VolumeEstimate volume_mc(const std::vector<Point>& frontier, OrthantSide side,
                         long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("volume_mc: samples must be >= 1");
  if (frontier.empty()) return {0.0, 0.0, samples};

  const int d = static_cast<int>(frontier.front().size());
  // Reflect upper-side vertices so one lower-orthant test serves both sides.
  std::vector<Point> verts = frontier;
  if (side == OrthantSide::Upper) {
    for (auto& v : verts) {
      for (double& c : v) c = 1.0 - c;
    }
  }

  SplitMix64 rng(seed);
  std::vector<double> u(static_cast<std::size_t>(d));
  long hits = 0;
  for (long q = 0; q < samples; ++q) {
    for (int k = 0; k < d; ++k) u[static_cast<std::size_t>(k)] = rng.next_unit();
    if (side == OrthantSide::Upper) {
      for (int k = 0; k < d; ++k) {
        u[static_cast<std::size_t>(k)] = 1.0 - u[static_cast<std::size_t>(k)];
      }
    }
    for (const auto& v : verts) {
      bool inside = true;
      for (int k = 0; k < d; ++k) {
        if (u[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(k)]) {
          inside = false;
          break;
        }
      }
      if (inside) {
        ++hits;
        break;
      }
    }
  }
  const double v = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = std::sqrt(v * (1.0 - v) / static_cast<double>(samples));
  return {v, se, samples};
}

double side_volume(const std::vector<Point>& frontier, OrthantSide side,
                   int dimension, const VolumePolicy& policy,
                   std::uint64_t mc_seed) {
  if (frontier.empty()) return 0.0;
  if (dimension <= policy.exact_max_dim) {
    std::vector<Point> verts = frontier;
    if (side == OrthantSide::Upper) {
      for (auto& v : verts) {
        for (double& c : v) c = 1.0 - c;
      }
    }
    return klee_volume(std::move(verts), dimension);
  }
  return volume_mc(frontier, side, policy.mc_samples, mc_seed).value;
}

BoundsPair bounds(const FrontierPair& frontiers, const VolumePolicy& policy,
                  std::uint64_t mc_seed) {
  const int d = frontiers.dimension();
  const double vol_minus =
      side_volume(frontiers.failure_frontier(), OrthantSide::Lower, d, policy,
                  SplitMix64::child_seed(mc_seed, 0));
  const double vol_plus =
      side_volume(frontiers.safe_frontier(), OrthantSide::Upper, d, policy,
                  SplitMix64::child_seed(mc_seed, 1));
  return {vol_minus, 1.0 - vol_plus};
}

}  // namespace monorare
