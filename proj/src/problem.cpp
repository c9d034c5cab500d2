#include "monorare/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace monorare {

double beta2_cdf(double z, double beta) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  return 1.0 - std::pow(1.0 - z, beta) * (1.0 + beta * z);
}

double beta2_quantile(double u, double beta) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("beta2_quantile: u must lie in (0,1)");
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (beta2_cdf(mid, beta) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double hydraulic_water_level(double q, double ks, double zm, double zv) {
  const double b = 300.0;
  const double l = 5000.0;
  return std::pow(q / (b * ks * std::sqrt((zm - zv) / l)), 0.6);
}

double hydraulic_margin(double q, double ks, double zm, double zv) {
  const double dike = 55.5;
  return dike - zv - hydraulic_water_level(q, ks, zm, zv);
}

MonotoneProblem::MonotoneProblem(
    std::string name, std::vector<Marginal> marginals, std::vector<int> signs,
    std::function<double(const std::vector<double>&)> physical_map,
    double threshold, std::optional<double> known_p)
    : name_(std::move(name)),
      marginals_(std::move(marginals)),
      signs_(std::move(signs)),
      physical_map_(std::move(physical_map)),
      threshold_(threshold),
      known_p_(known_p) {
  if (marginals_.empty()) {
    throw std::invalid_argument("MonotoneProblem: needs at least one marginal");
  }
  if (signs_.size() != marginals_.size()) {
    throw std::invalid_argument("MonotoneProblem: signs/marginals mismatch");
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) {
      throw std::invalid_argument("MonotoneProblem: signs must be +1 or -1");
    }
  }
}

std::vector<double> MonotoneProblem::to_physical(const Point& x) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw std::invalid_argument("evaluate: dimension mismatch");
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (signs_[i] == 1) ? x[i] : 1.0 - x[i];
    y[i] = marginals_[i].quantile(u);
  }
  return y;
}

Point MonotoneProblem::to_cube(const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != dimension()) {
    throw std::invalid_argument("to_cube: dimension mismatch");
  }
  Point x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double u = marginals_[i].cdf(y[i]);
    x[i] = (signs_[i] == 1) ? u : 1.0 - u;
  }
  return x;
}

double MonotoneProblem::evaluate(const Point& x) const {
  const std::vector<double> y = to_physical(x);
  ++calls_;
  return physical_map_(y) - threshold_;
}

namespace {

double toy_ratio(const std::vector<double>& y) {
  double rest = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) rest += y[i];
  return y[0] / (y[0] + rest);
}

}  // namespace

MonotoneProblem toy_problem(int d, double p) {
  if (d < 2) throw std::invalid_argument("toy_problem: d must be >= 2");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("toy_problem: p must lie in (0,1)");
  }
  std::vector<Marginal> marginals;
  std::vector<int> signs;
  marginals.reserve(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) {
    marginals.push_back(Marginal::gamma_integer(i + 1, 1.0));
    // The ratio rises with Y_1 and falls with every other input, so the
    // wrapped function is increasing once coordinates 2..d are flipped.
    signs.push_back(i == 1 ? 1 : -1);
  }
  const double beta = 0.5 * static_cast<double>((d + 1) * (d + 2)) - 3.0;
  const double threshold = beta2_quantile(p, beta);
  return MonotoneProblem("toy-d" + std::to_string(d), std::move(marginals),
                         std::move(signs), toy_ratio, threshold, p);
}

MonotoneProblem hydraulic_problem(HydraulicVersion version) {
  const Marginal q = Marginal::gumbel_truncated(1013.0, 558.0, 10.0, 1e4);
  const Marginal ks = Marginal::normal_truncated(27.8, 3.0, 0.0);
  if (version == HydraulicVersion::Dim2) {
    return MonotoneProblem(
        "hydraulic2", {q, ks}, {-1, 1},
        [](const std::vector<double>& y) {
          return hydraulic_margin(y[0], y[1], 55.0, 50.0);
        },
        0.0, std::nullopt);
  }
  const Marginal zm = Marginal::triangular(53.5, 55.0, 56.5);
  const Marginal zv = Marginal::triangular(48.5, 50.0, 51.5);
  return MonotoneProblem(
      "hydraulic4", {q, ks, zm, zv}, {-1, 1, 1, -1},
      [](const std::vector<double>& y) {
        return hydraulic_margin(y[0], y[1], y[2], y[3]);
      },
      0.0, std::nullopt);
}

std::function<double(const std::vector<double>&)> named_physical_map(
    const std::string& name, int dimension) {
  if (name == "coordinate-sum") {
    return [](const std::vector<double>& y) {
      double s = 0.0;
      for (double v : y) s += v;
      return s;
    };
  }
  if (name == "toy-ratio") {
    return toy_ratio;
  }
  if (name == "hydraulic-margin") {
    if (dimension != 4) {
      throw std::invalid_argument("hydraulic-margin map needs dimension 4");
    }
    return [](const std::vector<double>& y) {
      return hydraulic_margin(y[0], y[1], y[2], y[3]);
    };
  }
  throw std::invalid_argument("unknown physical map: " + name);
}

}  // namespace monorare
