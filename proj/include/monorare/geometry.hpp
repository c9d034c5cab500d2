#pragma once

#include <vector>

namespace monorare {

/// A point of the unit cube [0,1]^d.
using Point = std::vector<double>;

/// Outcome of testing a point against the two dominated subspaces.
enum class Domination {
  FailureDominated,  // some failure vertex dominates the point: g <= 0 certain
  SafeDominated,     // the point dominates some safe vertex: g > 0 certain
  NonDominated,      // sign of g unknown, a call to g would be informative
};

/// Coordinatewise partial order: x dominates y iff x_k >= y_k for all k.
/// Comparisons are exact (no epsilon). Throws std::invalid_argument on
/// dimension mismatch.
bool dominates(const Point& x, const Point& y);

void validate_unit_point(const Point& x, int dimension);

/// The two antichains of evaluated points generating the dominated
/// subspaces: lower orthants [0,x] of failure vertices and upper orthants
/// [x,1] of safe vertices. Both sides are kept minimal (inserting prunes any
/// vertex whose orthant becomes covered) and sorted by the first coordinate,
/// which gives an O(log n) classification path in dimension 2 and a cheap
/// scan cutoff otherwise.
class FrontierPair {
 public:
  explicit FrontierPair(int dimension);

  int dimension() const { return dimension_; }
  const std::vector<Point>& failure_frontier() const { return failure_; }
  const std::vector<Point>& safe_frontier() const { return safe_; }
  bool empty() const { return failure_.empty() && safe_.empty(); }

  /// Classify x against the dominated subspaces. Throws
  /// SeparabilityViolation if x is dominated both ways.
  Domination classify(const Point& x) const;

  /// Add an evaluated point with its signature (1 = failure side, g <= 0;
  /// 0 = safe side). Prunes newly covered vertices so both sides stay
  /// antichains. Inserting a point already covered by its own side is a
  /// no-op. Throws SeparabilityViolation if the insertion would put a
  /// failure vertex above a safe vertex.
  void insert(const Point& x, int signature);

 private:
  bool failure_dominated(const Point& x) const;
  bool safe_dominated(const Point& x) const;

  int dimension_;
  std::vector<Point> failure_;  // antichain, sorted by coordinate 0
  std::vector<Point> safe_;     // antichain, sorted by coordinate 0
};

}  // namespace monorare
