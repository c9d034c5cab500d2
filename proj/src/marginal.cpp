#include "monorare/marginal.hpp"

#include <cmath>
#include <stdexcept>

namespace monorare {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation for the inverse normal cdf (~1.15e-9
// relative error), used as the starting point for one Halley refinement.
double normal_quantile_estimate(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

constexpr double kSqrt2Pi = 2.506628274631000502;

}  // namespace

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("normal_quantile: u must lie in (0,1)");
  }
  double x = normal_quantile_estimate(u);
  // Halley refinement against the exact cdf.
  const double e = normal_cdf(x) - u;
  const double r = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= r / (1.0 + 0.5 * x * r);
  return x;
}

namespace {

double erlang_cdf(double t, int shape) {
  // 1 - e^-t * sum_{k<shape} t^k / k!, guarded for t <= 0.
  if (t <= 0.0) return 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < shape; ++k) {
    term *= t / static_cast<double>(k);
    sum += term;
  }
  return -std::expm1(-t + std::log(sum));
}

double erlang_pdf(double t, int shape) {
  if (t <= 0.0) return 0.0;
  double logf = -t + static_cast<double>(shape - 1) * std::log(t);
  for (int k = 2; k < shape; ++k) logf -= std::log(static_cast<double>(k));
  return std::exp(logf);
}

// Safeguarded Newton on the Erlang cdf, Wilson-Hilferty start.
double erlang_quantile(double u, int shape) {
  const double a = static_cast<double>(shape);
  const double z = normal_quantile(u);
  const double wh = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double t = a * wh * wh * wh;
  if (!(t > 0.0)) t = a * 1e-8;

  double lo = 0.0;
  double hi = t;
  while (erlang_cdf(hi, shape) < u) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) break;
  }
  if (t <= lo || t >= hi) t = 0.5 * (lo + hi);

  for (int it = 0; it < 100; ++it) {
    const double f = erlang_cdf(t, shape) - u;
    if (f > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double df = erlang_pdf(t, shape);
    double step = (df > 0.0) ? f / df : 0.0;
    double next = t - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-10 * (1.0 + std::abs(t))) return next;
    t = next;
  }
  return t;
}

double gumbel_cdf_raw(double y, double mu, double beta) {
  return std::exp(-std::exp(-(y - mu) / beta));
}

}  // namespace

Marginal Marginal::uniform(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("uniform: requires b > a");
  Marginal m;
  m.family_ = Family::Uniform;
  m.p1_ = a;
  m.p2_ = b;
  m.support_lo_ = a;
  m.support_hi_ = b;
  return m;
}

Marginal Marginal::gamma_integer(int shape, double scale) {
  if (shape < 1 || !(scale > 0.0)) {
    throw std::invalid_argument("gamma_integer: shape >= 1 and scale > 0");
  }
  Marginal m;
  m.family_ = Family::GammaInteger;
  m.shape_ = shape;
  m.p1_ = scale;
  m.support_lo_ = 0.0;
  m.support_hi_ = std::numeric_limits<double>::infinity();
  return m;
}

Marginal Marginal::gumbel_truncated(double location, double scale, double lo,
                                    double hi) {
  if (!(scale > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("gumbel_truncated: bad parameters");
  }
  Marginal m;
  m.family_ = Family::GumbelTruncated;
  m.p1_ = location;
  m.p2_ = scale;
  m.support_lo_ = lo;
  m.support_hi_ = hi;
  m.cdf_lo_ = gumbel_cdf_raw(lo, location, scale);
  m.cdf_hi_ = gumbel_cdf_raw(hi, location, scale);
  return m;
}

Marginal Marginal::normal_truncated(double mean, double sd, double lo,
                                    double hi) {
  if (!(sd > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("normal_truncated: bad parameters");
  }
  Marginal m;
  m.family_ = Family::NormalTruncated;
  m.p1_ = mean;
  m.p2_ = sd;
  m.support_lo_ = lo;
  m.support_hi_ = hi;
  m.cdf_lo_ = normal_cdf((lo - mean) / sd);
  m.cdf_hi_ = std::isinf(hi) ? 1.0 : normal_cdf((hi - mean) / sd);
  return m;
}

Marginal Marginal::triangular(double min, double mode, double max) {
  if (!(min < max) || !(mode >= min) || !(mode <= max)) {
    throw std::invalid_argument("triangular: requires min <= mode <= max");
  }
  Marginal m;
  m.family_ = Family::Triangular;
  m.p1_ = min;
  m.p2_ = mode;
  m.p3_ = max;
  m.support_lo_ = min;
  m.support_hi_ = max;
  return m;
}

double Marginal::cdf(double y) const {
  switch (family_) {
    case Family::Uniform: {
      if (y <= p1_) return 0.0;
      if (y >= p2_) return 1.0;
      return (y - p1_) / (p2_ - p1_);
    }
    case Family::GammaInteger:
      return erlang_cdf(y / p1_, shape_);
    case Family::GumbelTruncated: {
      if (y <= support_lo_) return 0.0;
      if (y >= support_hi_) return 1.0;
      return (gumbel_cdf_raw(y, p1_, p2_) - cdf_lo_) / (cdf_hi_ - cdf_lo_);
    }
    case Family::NormalTruncated: {
      if (y <= support_lo_) return 0.0;
      if (y >= support_hi_) return 1.0;
      return (normal_cdf((y - p1_) / p2_) - cdf_lo_) / (cdf_hi_ - cdf_lo_);
    }
    case Family::Triangular: {
      if (y <= p1_) return 0.0;
      if (y >= p3_) return 1.0;
      if (y <= p2_) return (y - p1_) * (y - p1_) / ((p3_ - p1_) * (p2_ - p1_));
      return 1.0 - (p3_ - y) * (p3_ - y) / ((p3_ - p1_) * (p3_ - p2_));
    }
  }
  return 0.0;
}

double Marginal::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("quantile: u must lie in (0,1)");
  }
  switch (family_) {
    case Family::Uniform:
      return p1_ + u * (p2_ - p1_);
    case Family::GammaInteger:
      return p1_ * erlang_quantile(u, shape_);
    case Family::GumbelTruncated: {
      const double up = cdf_lo_ + u * (cdf_hi_ - cdf_lo_);
      return p1_ - p2_ * std::log(-std::log(up));
    }
    case Family::NormalTruncated: {
      const double up = cdf_lo_ + u * (cdf_hi_ - cdf_lo_);
      return p1_ + p2_ * normal_quantile(up);
    }
    case Family::Triangular: {
      const double fc = (p2_ - p1_) / (p3_ - p1_);
      if (u <= fc) return p1_ + std::sqrt(u * (p3_ - p1_) * (p2_ - p1_));
      return p3_ - std::sqrt((1.0 - u) * (p3_ - p1_) * (p3_ - p2_));
    }
  }
  return 0.0;
}

std::string Marginal::family_name() const {
  switch (family_) {
    case Family::Uniform:
      return "uniform";
    case Family::GammaInteger:
      return "gamma";
    case Family::GumbelTruncated:
      return "gumbel-truncated";
    case Family::NormalTruncated:
      return "normal-truncated";
    case Family::Triangular:
      return "triangular";
  }
  return "?";
}

}  // namespace monorare
