#pragma once

#include <limits>
#include <string>

namespace monorare {

/// Standard normal cdf, accurate in both tails.
double normal_cdf(double z);

/// Inverse standard normal cdf on (0,1); rational initial estimate refined
/// by one Halley step against erfc, |error| below 1e-14 across the range.
double normal_quantile(double u);

/// One-dimensional input distribution with a strictly increasing continuous
/// cdf on its support. Quantiles are defined on the open interval (0,1);
/// evaluating one at 0 or 1 throws (several supports are unbounded and the
/// samplers never produce exact endpoints).
class Marginal {
 public:
  enum class Family {
    Uniform,          // [a, b]
    GammaInteger,     // Erlang: integer shape, scale
    GumbelTruncated,  // location, scale, truncated to [lo, hi]
    NormalTruncated,  // mean, sd, truncated to [lo, hi] (hi may be +inf)
    Triangular,       // min, mode, max
  };

  static Marginal uniform(double a = 0.0, double b = 1.0);
  static Marginal gamma_integer(int shape, double scale = 1.0);
  static Marginal gumbel_truncated(double location, double scale, double lo,
                                   double hi);
  static Marginal normal_truncated(
      double mean, double sd, double lo,
      double hi = std::numeric_limits<double>::infinity());
  static Marginal triangular(double min, double mode, double max);

  double cdf(double y) const;
  double quantile(double u) const;

  double support_lower() const { return support_lo_; }
  double support_upper() const { return support_hi_; }
  Family family() const { return family_; }
  std::string family_name() const;

 private:
  Marginal() = default;

  Family family_ = Family::Uniform;
  // Family parameters; meaning depends on family_ (see factory functions).
  double p1_ = 0.0, p2_ = 1.0, p3_ = 0.0, p4_ = 0.0;
  int shape_ = 1;
  double support_lo_ = 0.0, support_hi_ = 1.0;
  // Truncation renormalization: parent cdf at the support ends.
  double cdf_lo_ = 0.0, cdf_hi_ = 1.0;
};

}  // namespace monorare
