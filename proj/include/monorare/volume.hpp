#pragma once

#include <cstdint>
#include <vector>

#include "monorare/geometry.hpp"

namespace monorare {

/// Deterministic probability bracket [lower, upper] for p.
struct BoundsPair {
  double lower = 0.0;
  double upper = 1.0;
  double width() const { return upper - lower; }
};

/// Result of a volume computation. std_error is 0 for exact sweepline
/// results; for Monte Carlo it is the binomial standard error
/// sqrt(v(1-v)/Q).
struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long sample_count = 0;
};

/// Chooses between the exact sweepline and Monte Carlo volumes. Exact
/// recursion is affordable up to dimension 3 at desk scale; beyond that the
/// cost grows like n^(d-2) per call and plain MC wins.
struct VolumePolicy {
  int exact_max_dim = 3;
  long mc_samples = 1'000'000;
};

enum class OrthantSide {
  Lower,  // union of [0, x_j]: failure-dominated volume
  Upper,  // union of [x_j, 1]: safety-dominated volume
};

/// Exact measure of the union of lower orthants [0, x_j] anchored at the
/// origin, via the recursive sweepline over the last coordinate. The base
/// case (one remaining dimension) is the running maximum. Vertex order is
/// irrelevant and dominated vertices contribute nothing.
double klee_volume(std::vector<Point> vertices, int dimension);

/// Unbiased MC estimate of an orthant-union volume. The upper side reflects
/// every coordinate (x -> 1-x) and reuses the lower-orthant test.
/// Deterministic given (frontier, samples, seed).
VolumeEstimate volume_mc(const std::vector<Point>& frontier, OrthantSide side,
                         long samples, std::uint64_t seed);

/// Volume of one side of a FrontierPair under the policy.
double side_volume(const std::vector<Point>& frontier, OrthantSide side,
                   int dimension, const VolumePolicy& policy,
                   std::uint64_t mc_seed = 0);

/// Deterministic bounds {Vol(U_n^-), 1 - Vol(U_n^+)} for the current
/// frontiers. mc_seed only matters when the policy selects MC volumes.
BoundsPair bounds(const FrontierPair& frontiers, const VolumePolicy& policy,
                  std::uint64_t mc_seed = 0);

}  // namespace monorare
