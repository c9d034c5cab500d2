#include "monorare/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "monorare/errors.hpp"
#include "monorare/rng.hpp"

namespace monorare {

double MinMaxNetwork::eval(const Point& x) const {
  double best = -std::numeric_limits<double>::infinity();
  const double* w = weights.data();
  for (int g = 0; g < groups; ++g) {
    double lo = std::numeric_limits<double>::infinity();
    for (int u = 0; u < units; ++u) {
      double a = offsets[static_cast<std::size_t>(g * units + u)];
      for (int d = 0; d < dimension; ++d) a += w[d] * x[static_cast<std::size_t>(d)];
      w += dimension;
      lo = std::min(lo, a);
    }
    best = std::max(best, lo);
  }
  return best;
}

bool MinMaxNetwork::weights_nonnegative() const {
  return std::all_of(weights.begin(), weights.end(),
                     [](double v) { return v >= 0.0; });
}

namespace {

struct SmoothForward {
  double value = 0.0;
  std::vector<double> group_prob;  // softmax over groups
  std::vector<double> unit_prob;   // per group, softmin over units
};

// Smooth network output with log-sum-exp min/max at temperature tau, plus
// the softmax weights needed for the backward pass.
void smooth_eval(const std::vector<double>& w, const std::vector<double>& b,
                 int groups, int units, int dim, const double* x, double tau,
                 SmoothForward& out) {
  std::vector<double>& gm = out.group_prob;
  std::vector<double>& up = out.unit_prob;
  gm.resize(static_cast<std::size_t>(groups));
  up.resize(static_cast<std::size_t>(groups * units));

  for (int g = 0; g < groups; ++g) {
    double amin = std::numeric_limits<double>::infinity();
    for (int u = 0; u < units; ++u) {
      const std::size_t base = static_cast<std::size_t>((g * units + u) * dim);
      double a = b[static_cast<std::size_t>(g * units + u)];
      for (int d = 0; d < dim; ++d) a += w[base + static_cast<std::size_t>(d)] * x[d];
      up[static_cast<std::size_t>(g * units + u)] = a;
      amin = std::min(amin, a);
    }
    double denom = 0.0;
    for (int u = 0; u < units; ++u) {
      const std::size_t idx = static_cast<std::size_t>(g * units + u);
      const double e = std::exp(-(up[idx] - amin) / tau);
      up[idx] = e;
      denom += e;
    }
    for (int u = 0; u < units; ++u) {
      up[static_cast<std::size_t>(g * units + u)] /= denom;
    }
    gm[static_cast<std::size_t>(g)] = amin - tau * std::log(denom);
  }

  double gmax = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < groups; ++g) gmax = std::max(gmax, gm[static_cast<std::size_t>(g)]);
  double denom = 0.0;
  for (int g = 0; g < groups; ++g) {
    const double e = std::exp((gm[static_cast<std::size_t>(g)] - gmax) / tau);
    gm[static_cast<std::size_t>(g)] = e;
    denom += e;
  }
  for (int g = 0; g < groups; ++g) gm[static_cast<std::size_t>(g)] /= denom;
  out.value = gmax + tau * std::log(denom);
}

}  // namespace

TrainResult train_minmax(const std::vector<Point>& failure_samples,
                         const std::vector<Point>& safe_samples,
                         const TrainOptions& options) {
  if (failure_samples.empty() || safe_samples.empty()) {
    throw std::invalid_argument("train_minmax: both sample sets must be non-empty");
  }
  const int dim = static_cast<int>(failure_samples.front().size());
  const int groups = options.groups;
  const int units = options.units;
  if (groups < 1 || units < 1) {
    throw std::invalid_argument("train_minmax: groups and units must be >= 1");
  }

  // Flatten samples: failures first (target -1), then safes (target +1).
  const std::size_t n_fail = failure_samples.size();
  const std::size_t n_safe = safe_samples.size();
  const std::size_t n = n_fail + n_safe;
  std::vector<double> xs(n * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < n_fail; ++i) {
    std::copy(failure_samples[i].begin(), failure_samples[i].end(),
              xs.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
  }
  for (std::size_t i = 0; i < n_safe; ++i) {
    std::copy(safe_samples[i].begin(), safe_samples[i].end(),
              xs.begin() + static_cast<std::ptrdiff_t>((n_fail + i) * static_cast<std::size_t>(dim)));
  }

  const std::size_t n_params = static_cast<std::size_t>(groups * units * dim);
  const std::size_t n_units = static_cast<std::size_t>(groups * units);
  std::vector<double> v(n_params);  // raw weights, w = v^2
  std::vector<double> b(n_units);

  // Initialization: random positive normals; each offset is set from the
  // projection quantiles of the two clouds along the unit's own direction,
  // so every starting hyperplane already grazes the frontier band.
  SplitMix64 rng(SplitMix64::child_seed(options.seed, 0x7a11));
  std::vector<double> w(n_params);
  const std::size_t probe = 2048;
  std::vector<double> proj_f(std::min(n_fail, probe));
  std::vector<double> proj_s(std::min(n_safe, probe));
  const std::size_t stride_f = std::max<std::size_t>(1, n_fail / proj_f.size());
  const std::size_t stride_s = std::max<std::size_t>(1, n_safe / proj_s.size());
  for (int g = 0; g < groups; ++g) {
    for (int u = 0; u < units; ++u) {
      const std::size_t base = static_cast<std::size_t>((g * units + u) * dim);
      double sum = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double e = -std::log(rng.next_unit());  // Exp(1)
        w[base + static_cast<std::size_t>(d)] = e;
        sum += e;
      }
      for (int d = 0; d < dim; ++d) {
        w[base + static_cast<std::size_t>(d)] *= 3.0 / sum;
      }
      auto project = [&](const std::vector<Point>& pts, std::size_t stride,
                         std::vector<double>& out) {
        for (std::size_t i = 0; i < out.size(); ++i) {
          const Point& z = pts[(i * stride) % pts.size()];
          double dot = 0.0;
          for (int d = 0; d < dim; ++d) {
            dot += w[base + static_cast<std::size_t>(d)] *
                   z[static_cast<std::size_t>(d)];
          }
          out[i] = dot;
        }
      };
      project(failure_samples, stride_f, proj_f);
      project(safe_samples, stride_s, proj_s);
      // Grazing chord: between a high quantile of the failure cloud and a
      // low quantile of the safe cloud, jittered for diversity.
      const double qf = 0.90 + 0.099 * rng.next_unit();
      const double ql = 0.001 + 0.099 * rng.next_unit();
      auto quantile_of = [](std::vector<double>& vals, double q) {
        const std::size_t idx = static_cast<std::size_t>(
            q * static_cast<double>(vals.size() - 1));
        std::nth_element(vals.begin(),
                         vals.begin() + static_cast<std::ptrdiff_t>(idx),
                         vals.end());
        return vals[idx];
      };
      const double t_fail = quantile_of(proj_f, qf);
      const double t_safe = quantile_of(proj_s, ql);
      b[static_cast<std::size_t>(g * units + u)] =
          -0.5 * (t_fail + t_safe);
    }
  }
  for (std::size_t i = 0; i < n_params; ++i) v[i] = std::sqrt(w[i]);

  std::vector<double> grad_w(n_params), grad_b(n_units);
  std::vector<double> m1v(n_params, 0.0), m2v(n_params, 0.0);
  std::vector<double> m1b(n_units, 0.0), m2b(n_units, 0.0);
  SmoothForward fwd;

  const double inv_n = 1.0 / static_cast<double>(n);
  const double b1 = options.momentum;  // Adam first-moment decay
  const double b2 = 0.999;
  const double eps = 1e-8;
  double initial_loss = 0.0;
  double loss = 0.0;
  for (int it = 0; it < options.iterations; ++it) {
    const double frac = (options.iterations > 1)
                            ? static_cast<double>(it) /
                                  static_cast<double>(options.iterations - 1)
                            : 1.0;
    const double tau =
        options.tau_start * std::pow(options.tau_end / options.tau_start, frac);
    // Inverse temperature on the logistic margin: early iterations shape the
    // surface coarsely, late ones resolve the thin band.
    const double beta =
        options.beta_start * std::pow(options.beta_end / options.beta_start, frac);
    for (std::size_t i = 0; i < n_params; ++i) w[i] = v[i] * v[i];
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);

    loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = xs.data() + i * static_cast<std::size_t>(dim);
      const double y = (i < n_fail) ? -1.0 : 1.0;
      smooth_eval(w, b, groups, units, dim, x, tau, fwd);
      const double margin = beta * y * fwd.value;
      // softplus(-margin) and its derivative, overflow-safe
      loss += (margin > 0.0) ? std::log1p(std::exp(-margin))
                             : -margin + std::log1p(std::exp(margin));
      const double dval = -beta * y / (1.0 + std::exp(margin));  // dL/df
      for (int g = 0; g < groups; ++g) {
        const double pg = fwd.group_prob[static_cast<std::size_t>(g)];
        if (pg < 1e-12) continue;
        for (int u = 0; u < units; ++u) {
          const double q = fwd.unit_prob[static_cast<std::size_t>(g * units + u)];
          if (q < 1e-12) continue;
          const double coef = dval * pg * q;
          const std::size_t base = static_cast<std::size_t>((g * units + u) * dim);
          grad_b[static_cast<std::size_t>(g * units + u)] += coef;
          for (int d = 0; d < dim; ++d) {
            grad_w[base + static_cast<std::size_t>(d)] += coef * x[d];
          }
        }
      }
    }
    loss *= inv_n;
    if (it == 0) initial_loss = loss;
    if (!std::isfinite(loss)) {
      throw TrainingDiverged("train_minmax: non-finite loss at iteration " +
                             std::to_string(it));
    }

    // Adam step; the chain rule through w = v^2 contributes the factor 2v.
    // The step size decays with the margin sharpening, which keeps the
    // high-beta end of the schedule stable.
    const double lr = options.learning_rate *
                      (0.5 * (1.0 + std::cos(3.141592653589793 * frac)) + 0.02);
    const double corr1 = 1.0 - std::pow(b1, it + 1);
    const double corr2 = 1.0 - std::pow(b2, it + 1);
    for (std::size_t i = 0; i < n_params; ++i) {
      const double g = 2.0 * v[i] * grad_w[i] * inv_n;
      m1v[i] = b1 * m1v[i] + (1.0 - b1) * g;
      m2v[i] = b2 * m2v[i] + (1.0 - b2) * g * g;
      v[i] -= lr * (m1v[i] / corr1) / (std::sqrt(m2v[i] / corr2) + eps);
    }
    for (std::size_t i = 0; i < n_units; ++i) {
      const double g = grad_b[i] * inv_n;
      m1b[i] = b1 * m1b[i] + (1.0 - b1) * g;
      m2b[i] = b2 * m2b[i] + (1.0 - b2) * g * g;
      b[i] -= lr * (m1b[i] / corr1) / (std::sqrt(m2b[i] / corr2) + eps);
    }
  }

  TrainResult result;
  result.net.dimension = dim;
  result.net.groups = groups;
  result.net.units = units;
  result.net.weights.resize(n_params);
  for (std::size_t i = 0; i < n_params; ++i) result.net.weights[i] = v[i] * v[i];
  result.net.offsets = b;
  result.initial_loss = initial_loss;
  result.final_loss = loss;

  long wrong = 0;
  for (std::size_t i = 0; i < n_fail; ++i) {
    if (result.net.signature(failure_samples[i]) != -1) ++wrong;
  }
  for (std::size_t i = 0; i < n_safe; ++i) {
    if (result.net.signature(safe_samples[i]) != 1) ++wrong;
  }
  result.train_error = static_cast<double>(wrong) / static_cast<double>(n);

  // The margin temperature grows during training, so compare the final loss
  // against the zero classifier at the same temperature (softplus(0) = ln 2)
  // rather than against the first iteration.
  if (!(result.final_loss < std::log(2.0))) {
    throw TrainingDiverged("train_minmax: loss failed to decrease (" +
                           std::to_string(initial_loss) + " -> " +
                           std::to_string(loss) + ")");
  }
  return result;
}

double surrogate_volume(const MinMaxNetwork& net, long q, std::uint64_t seed) {
  if (q < 1) throw std::invalid_argument("surrogate_volume: q must be >= 1");
  SplitMix64 rng(seed);
  Point x(static_cast<std::size_t>(net.dimension));
  long hits = 0;
  for (long i = 0; i < q; ++i) {
    for (int d = 0; d < net.dimension; ++d) {
      x[static_cast<std::size_t>(d)] = rng.next_unit();
    }
    if (net.eval(x) <= 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(q);
}

}  // namespace monorare
