#pragma once

#include <cstdint>
#include <vector>

#include "monorare/geometry.hpp"

namespace monorare {

/// Monotone piecewise-linear classifier: max over groups of min over affine
/// units with nonnegative weights, so x >= y implies eval(x) >= eval(y).
/// eval <= 0 is read as failure (-1), matching the <= in the signature.
struct MinMaxNetwork {
  int dimension = 0;
  int groups = 0;
  int units = 0;
  std::vector<double> weights;  // [group][unit][dim], all >= 0
  std::vector<double> offsets;  // [group][unit]

  double eval(const Point& x) const;
  /// -1 iff eval(x) <= 0 (predicted failure), +1 otherwise.
  int signature(const Point& x) const { return eval(x) <= 0.0 ? -1 : 1; }
  bool weights_nonnegative() const;

  double weight(int g, int u, int d) const {
    return weights[static_cast<std::size_t>((g * units + u) * dimension + d)];
  }
  double offset(int g, int u) const {
    return offsets[static_cast<std::size_t>(g * units + u)];
  }
};

struct TrainOptions {
  int groups = 4;
  int units = 4;
  int iterations = 400;
  double learning_rate = 0.01;
  double momentum = 0.9;      // Adam first-moment decay
  double tau_start = 0.1;     // log-sum-exp temperature, annealed geometrically
  double tau_end = 0.005;
  double beta_start = 2.0;    // logistic margin inverse temperature, annealed
  double beta_end = 200.0;
  std::uint64_t seed = 1;
};

struct TrainResult {
  MinMaxNetwork net;
  double train_error = 1.0;  // misclassification rate at exact inference
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

/// Fit the surrogate on dominated-region samples: failure points are pushed
/// to eval <= 0, safe points to eval > 0. Full-batch gradient descent (Adam
/// steps) on a temperature-annealed logistic loss; weights stay nonnegative
/// through the squared reparameterization w = v^2; min/max are smoothed by
/// an annealed log-sum-exp during training and exact at inference.
/// Throws TrainingDiverged if the final loss is no better than the zero
/// classifier or turns non-finite.
TrainResult train_minmax(const std::vector<Point>& failure_samples,
                         const std::vector<Point>& safe_samples,
                         const TrainOptions& options);

/// MC estimate of the volume under the replicated surface:
/// fraction of Q uniform cube points with predicted failure.
double surrogate_volume(const MinMaxNetwork& net, long q, std::uint64_t seed);

}  // namespace monorare
