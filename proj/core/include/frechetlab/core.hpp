#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechetlab/errors.hpp"
#include "frechetlab/parallel.hpp"
#include "frechetlab/rng.hpp"

namespace frechetlab {

enum class SpaceKind { Circle, Sphere, PreShape, Wasserstein };

// A mean set is flagged unique when its diameter is below this tolerance.
inline constexpr double kMeanUniquenessTol = 1e-6;

// Finitely supported probability measure over points of one space.
template <class P>
struct EmpiricalMeasure {
  std::vector<P> atoms;
  std::vector<double> weights;

  EmpiricalMeasure(std::vector<P> a, std::vector<double> w)
      : atoms(std::move(a)), weights(std::move(w)) {
    validate();
  }

  static EmpiricalMeasure uniform(std::vector<P> a) {
    const std::size_t n = a.size();
    if (n == 0) throw InvalidInput("empirical measure needs atoms");
    return EmpiricalMeasure(std::move(a),
                            std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return atoms.size(); }

 private:
  void validate() const {
    if (atoms.empty()) throw InvalidInput("empirical measure needs atoms");
    if (atoms.size() != weights.size()) {
      throw InvalidInput("atom/weight count mismatch");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw InvalidInput("negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidInput("weights must sum to 1 within 1e-12");
    }
  }
};

// Set of minimizers of a Frechet rho-function together with the attained
// value. `whole_space` marks the degenerate case where every point minimizes
// (extrinsic mean with vanishing ambient mean). `eigen_gap` carries the
// top-eigenvalue gap diagnostic for residual means.
template <class P>
struct MeanSet {
  std::vector<P> minimizers;
  double frechet_value = 0.0;
  double diameter = 0.0;
  bool unique = true;
  bool whole_space = false;
  std::optional<double> eigen_gap;
};

template <class Space>
MeanSet<typename Space::Point> make_mean_set(
    const Space& space, std::vector<typename Space::Point> minimizers,
    double value) {
  MeanSet<typename Space::Point> set;
  set.minimizers = std::move(minimizers);
  set.frechet_value = value;
  double diam = 0.0;
  for (std::size_t i = 0; i < set.minimizers.size(); ++i) {
    for (std::size_t j = i + 1; j < set.minimizers.size(); ++j) {
      diam = std::max(diam,
                      space.distance(set.minimizers[i], set.minimizers[j]));
    }
  }
  set.diameter = diam;
  set.unique = diam < kMeanUniquenessTol;
  return set;
}

// Deterministic measurable selection: minimizers are stored in canonical
// ascending order per space, so the selection is the first one.
template <class P>
const P& measurable_selection(const MeanSet<P>& set) {
  if (set.minimizers.empty()) {
    throw InvalidInput("mean set has no representable minimizer");
  }
  return set.minimizers.front();
}

// Cost functional defining a generalized mean; `honest` documents whether
// rho(., x) is uniquely minimized at x.
template <class P>
struct RhoFunction {
  std::function<double(const P&, const P&)> evaluate;
  bool honest = true;
};

template <class Space>
RhoFunction<typename Space::Point> squared_distance_rho(const Space& space) {
  return {[space](const typename Space::Point& a,
                  const typename Space::Point& b) {
            const double d = space.distance(a, b);
            return d * d;
          },
          true};
}

template <class P>
double frechet_value(const RhoFunction<P>& rho, const EmpiricalMeasure<P>& mu,
                     const P& x) {
  double value = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    value += mu.weights[i] * rho.evaluate(x, mu.atoms[i]);
  }
  return value;
}

template <class Space>
double frechet_value(const Space& space,
                     const EmpiricalMeasure<typename Space::Point>& mu,
                     const typename Space::Point& x) {
  return frechet_value(squared_distance_rho(space), mu, x);
}

// Named generative model with deterministic seeded sampling.
template <class P>
struct Sampler {
  std::string name;
  std::function<std::vector<P>(std::size_t, RngStream&)> draw;
};

template <class P>
struct NamedEstimator {
  std::string name;
  std::function<P(const std::vector<P>&)> estimate;
};

struct RiskReport {
  std::size_t n = 0;
  double p = 2.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

struct ModulationCurve {
  std::vector<std::pair<std::size_t, double>> entries;
  double denominator = 0.0;
};

struct RateEstimate {
  double slope = 0.0;
  double std_error = 0.0;
  std::vector<RiskReport> risks;
};

// Monte Carlo estimate of E[d^p(estimator(X_1..X_n), truth)]. Replication r
// draws from the stream derived from (seed, r), and the reduction runs in
// replication order, so the report is bit-identical for any thread count.
template <class Space>
RiskReport risk(const Space& space,
                const std::function<typename Space::Point(
                    const std::vector<typename Space::Point>&)>& estimator,
                const Sampler<typename Space::Point>& sampler,
                const typename Space::Point& truth, std::size_t n, double p,
                std::size_t reps, std::uint64_t seed, unsigned threads = 1) {
  if (reps < 2) throw InvalidInput("risk needs reps >= 2");
  if (n < 1) throw InvalidInput("risk needs n >= 1");
  if (p < 1.0) throw InvalidInput("risk needs p >= 1");

  std::vector<double> values(reps);
  parallel_for_indexed(reps, threads, [&](std::size_t rep) {
    RngStream rng = RngStream::for_replication(seed, rep);
    const auto sample = sampler.draw(n, rng);
    typename Space::Point estimate;
    try {
      estimate = estimator(sample);
    } catch (const std::exception& e) {
      throw EstimatorError(rep, e.what());
    }
    values[rep] = std::pow(space.distance(estimate, truth), p);
  });

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(reps);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(reps - 1));

  RiskReport report;
  report.n = n;
  report.p = p;
  report.estimate = mean;
  report.std_error = sd / std::sqrt(static_cast<double>(reps));
  report.replications = reps;
  return report;
}

// Variance modulation m_n = n E[d^2(mean_n, truth)] / E[d^2(X, truth)],
// evaluated with the space's empirical Frechet mean as the estimator.
template <class Space>
ModulationCurve variance_modulation(
    const Space& space,
    const std::function<typename Space::Point(
        const std::vector<typename Space::Point>&)>& empirical_mean,
    const Sampler<typename Space::Point>& sampler,
    const typename Space::Point& truth, double population_var,
    const std::vector<std::size_t>& n_grid, std::size_t reps,
    std::uint64_t seed, unsigned threads = 1) {
  if (!(population_var > 0.0)) {
    throw InvalidInput("variance modulation needs population_var > 0");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidInput("n grid must be strictly increasing");
    }
  }
  ModulationCurve curve;
  curve.denominator = population_var;
  for (std::size_t n : n_grid) {
    const RiskReport r =
        risk(space, empirical_mean, sampler, truth, n, 2.0, reps, seed, threads);
    curve.entries.emplace_back(
        n, static_cast<double>(n) * r.estimate / population_var);
  }
  return curve;
}

// Least-squares slope of log E[d(mean_n, truth)] against log n. The reported
// standard error propagates the per-point Monte Carlo errors through the
// least-squares weights.
template <class Space>
RateEstimate rate_estimate(
    const Space& space,
    const std::function<typename Space::Point(
        const std::vector<typename Space::Point>&)>& estimator,
    const Sampler<typename Space::Point>& sampler,
    const typename Space::Point& truth, const std::vector<std::size_t>& n_grid,
    std::size_t reps, std::uint64_t seed, unsigned threads = 1) {
  if (n_grid.size() < 3) {
    throw InvalidInput("rate estimation needs >= 3 grid points");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidInput("n grid must be strictly increasing");
    }
  }

  RateEstimate rate;
  for (std::size_t n : n_grid) {
    rate.risks.push_back(
        risk(space, estimator, sampler, truth, n, 1.0, reps, seed, threads));
  }
  bool any_positive = false;
  for (const auto& r : rate.risks) any_positive |= r.estimate > 0.0;
  if (!any_positive) throw DegenerateRegression("all risks are zero");
  for (const auto& r : rate.risks) {
    if (!(r.estimate > 0.0)) {
      throw DegenerateRegression("risk vanished at n = " + std::to_string(r.n));
    }
  }

  const std::size_t k = n_grid.size();
  std::vector<double> x(k), y(k);
  double xbar = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(static_cast<double>(n_grid[i]));
    y[i] = std::log(rate.risks[i].estimate);
    xbar += x[i];
  }
  xbar /= static_cast<double>(k);
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) sxx += (x[i] - xbar) * (x[i] - xbar);
  double slope = 0.0;
  double var_slope = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double c = (x[i] - xbar) / sxx;
    slope += c * y[i];
    const double log_se = rate.risks[i].std_error / rate.risks[i].estimate;
    var_slope += c * c * log_se * log_se;
  }
  rate.slope = slope;
  rate.std_error = std::sqrt(var_slope);
  return rate;
}

}  // namespace frechetlab
