#include "monorare/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "monorare/errors.hpp"

namespace monorare {

bool dominates(const Point& x, const Point& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("dominates: dimension mismatch");
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < y[k]) return false;
  }
  return true;
}

void validate_unit_point(const Point& x, int dimension) {
  if (static_cast<int>(x.size()) != dimension) {
    throw std::invalid_argument("point dimension mismatch");
  }
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("point coordinate outside [0,1]");
    }
  }
}

FrontierPair::FrontierPair(int dimension) : dimension_(dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("FrontierPair: dimension must be >= 1");
  }
}

namespace {

// First index whose coordinate 0 is >= a.
std::size_t lower_bound_x0(const std::vector<Point>& pts, double a) {
  return static_cast<std::size_t>(
      std::lower_bound(pts.begin(), pts.end(), a,
                       [](const Point& p, double v) { return p[0] < v; }) -
      pts.begin());
}

// First index whose coordinate 0 is > a.
std::size_t upper_bound_x0(const std::vector<Point>& pts, double a) {
  return static_cast<std::size_t>(
      std::upper_bound(pts.begin(), pts.end(), a,
                       [](double v, const Point& p) { return v < p[0]; }) -
      pts.begin());
}

bool dominates_unchecked(const Point& x, const Point& y) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < y[k]) return false;
  }
  return true;
}

}  // namespace

bool FrontierPair::failure_dominated(const Point& x) const {
  // A failure vertex f can dominate x only if f[0] >= x[0].
  std::size_t j = lower_bound_x0(failure_, x[0]);
  if (dimension_ == 2) {
    // Antichain sorted by x0 ascending has x1 descending, so the suffix
    // member with the largest second coordinate is the first one.
    return j < failure_.size() && failure_[j][1] >= x[1];
  }
  for (; j < failure_.size(); ++j) {
    if (dominates_unchecked(failure_[j], x)) return true;
  }
  return false;
}

bool FrontierPair::safe_dominated(const Point& x) const {
  // x can dominate a safe vertex s only if s[0] <= x[0].
  std::size_t end = upper_bound_x0(safe_, x[0]);
  if (dimension_ == 2) {
    return end > 0 && safe_[end - 1][1] <= x[1];
  }
  for (std::size_t j = 0; j < end; ++j) {
    if (dominates_unchecked(x, safe_[j])) return true;
  }
  return false;
}

Domination FrontierPair::classify(const Point& x) const {
  validate_unit_point(x, dimension_);
  const bool below = failure_dominated(x);
  const bool above = safe_dominated(x);
  if (below && above) {
    throw SeparabilityViolation(
        "classify: point dominated by both frontiers; g is not monotone");
  }
  if (below) return Domination::FailureDominated;
  if (above) return Domination::SafeDominated;
  return Domination::NonDominated;
}

void FrontierPair::insert(const Point& x, int signature) {
  validate_unit_point(x, dimension_);
  if (signature != 0 && signature != 1) {
    throw std::invalid_argument("insert: signature must be 0 or 1");
  }

  if (signature == 1) {
    if (safe_dominated(x)) {
      throw SeparabilityViolation(
          "insert: failure point dominates a safe vertex");
    }
    if (failure_dominated(x)) return;  // already covered, union unchanged
    // Prune failure vertices covered by the new lower orthant (y <= x),
    // which all live in the prefix with y[0] <= x[0].
    std::size_t end = upper_bound_x0(failure_, x[0]);
    std::size_t kept = 0;
    for (std::size_t j = 0; j < end; ++j) {
      if (!dominates_unchecked(x, failure_[j])) {
        if (kept != j) failure_[kept] = std::move(failure_[j]);
        ++kept;
      }
    }
    if (kept != end) {
      failure_.erase(failure_.begin() + static_cast<std::ptrdiff_t>(kept),
                     failure_.begin() + static_cast<std::ptrdiff_t>(end));
    }
    failure_.insert(failure_.begin() + static_cast<std::ptrdiff_t>(
                                           lower_bound_x0(failure_, x[0])),
                    x);
  } else {
    if (failure_dominated(x)) {
      throw SeparabilityViolation(
          "insert: safe point dominated by a failure vertex");
    }
    if (safe_dominated(x)) return;
    // Prune safe vertices whose upper orthant is covered (y >= x).
    std::size_t start = lower_bound_x0(safe_, x[0]);
    std::size_t kept = start;
    for (std::size_t j = start; j < safe_.size(); ++j) {
      if (!dominates_unchecked(safe_[j], x)) {
        if (kept != j) safe_[kept] = std::move(safe_[j]);
        ++kept;
      }
    }
    safe_.resize(kept);
    safe_.insert(
        safe_.begin() + static_cast<std::ptrdiff_t>(lower_bound_x0(safe_, x[0])),
        x);
  }
}

}  // namespace monorare
