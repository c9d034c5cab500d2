#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monorare/geometry.hpp"
#include "monorare/marginal.hpp"

namespace monorare {

/// Beta(2, beta) cdf in closed form: 1 - (1-z)^beta (1 + beta z).
double beta2_cdf(double z, double beta);

/// Beta(2, beta) quantile by bisection on the closed-form cdf.
double beta2_quantile(double u, double beta);

/// Downstream water level of the river section, as a function of the
/// physical inputs (discharge, friction, upstream/downstream bed altitude).
double hydraulic_water_level(double q, double ks, double zm, double zv);

/// Flood margin: dike level minus flooded water line. Negative means flood.
double hydraulic_margin(double q, double ks, double zm, double zv);

/// A monotone black box on the unit cube: coordinatewise sign flips, then
/// marginal quantile transforms, then a physical map minus a threshold.
/// Wrapped this way, g is globally increasing and p = P(g(X) <= 0) under
/// uniform X.
class MonotoneProblem {
 public:
  MonotoneProblem(std::string name, std::vector<Marginal> marginals,
                  std::vector<int> signs,
                  std::function<double(const std::vector<double>&)> physical_map,
                  double threshold, std::optional<double> known_p);

  int dimension() const { return static_cast<int>(marginals_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const std::vector<int>& signs() const { return signs_; }
  double threshold() const { return threshold_; }
  std::optional<double> known_p() const { return known_p_; }

  /// g(x) for x in the open unit cube. Increments the call counter.
  double evaluate(const Point& x) const;

  /// Physical coordinates for a cube point (sign flips + quantiles).
  std::vector<double> to_physical(const Point& x) const;

  /// Cube coordinates of a physical point (cdfs + sign flips).
  Point to_cube(const std::vector<double>& y) const;

  long calls() const { return calls_; }
  void reset_calls() const { calls_ = 0; }

  /// The black box hand-off used by the engine; keeps counting calls.
  std::function<double(const Point&)> evaluator() const {
    return [this](const Point& x) { return evaluate(x); };
  }

 private:
  std::string name_;
  std::vector<Marginal> marginals_;
  std::vector<int> signs_;
  std::function<double(const std::vector<double>&)> physical_map_;
  double threshold_;
  std::optional<double> known_p_;
  mutable long calls_ = 0;
};

/// The generic toy family: Z_d = Y_1 / (Y_1 + sum_{i>=2} Y_i) with
/// Y_i ~ Gamma(i+1, 1). Z_d is Beta(2, (d+1)(d+2)/2 - 3) so the threshold
/// quantile makes P(g <= 0) = p exactly.
MonotoneProblem toy_problem(int d, double p);

enum class HydraulicVersion { Dim2, Dim4 };

/// Flood probability of the river section (dike level 55.5 m). The 2-d
/// version fixes the bed altitudes at their modes (Z_m = 55, Z_v = 50).
MonotoneProblem hydraulic_problem(HydraulicVersion version);

/// Registry of named physical maps for config-defined problems:
/// "coordinate-sum", "toy-ratio", "hydraulic-margin".
std::function<double(const std::vector<double>&)> named_physical_map(
    const std::string& name, int dimension);

}  // namespace monorare
