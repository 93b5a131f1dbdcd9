#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "frechetlab/core.hpp"

namespace frechetlab::circle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kUniformDensity = 1.0 / kTwoPi;

// Wraps an angle into the canonical range [-pi, pi).
inline double wrap_angle(double x) {
  double r = x - kTwoPi * std::floor((x + kPi) / kTwoPi);
  if (r >= kPi) r -= kTwoPi;   // guards against floating-point edge at +pi
  if (r < -kPi) r += kTwoPi;
  return r;
}

// Point on S^1 = [-pi, pi) with -pi and pi identified.
struct CirclePoint {
  double angle = 0.0;

  CirclePoint() = default;
  explicit CirclePoint(double a) : angle(wrap_angle(a)) {}
};

// Arc-length distance, in [0, pi].
inline double arc_distance(const CirclePoint& x, const CirclePoint& y) {
  double d = std::abs(x.angle - y.angle);
  return d > kPi ? kTwoPi - d : d;
}

// Antipode of a, canonically wrapped.
inline double antipode(double a) { return wrap_angle(a + kPi); }

struct CircleSpace {
  using Point = CirclePoint;
  static constexpr SpaceKind kind = SpaceKind::Circle;
  double distance(const Point& a, const Point& b) const {
    return arc_distance(a, b);
  }
};

// ---------------------------------------------------------------------------
// Exact empirical intrinsic mean.
//
// The empirical Frechet function for the squared arc distance is piecewise
// quadratic with unit leading coefficient; its breakpoints are the antipodes
// of the atoms. Sweeping the arcs between consecutive antipodes, the branch
// of exactly one atom shifts by 2*pi at each breakpoint, so the per-arc
// vertex (the weighted Euclidean mean of the shifted representatives) can be
// maintained with O(1) updates after sorting.
// ---------------------------------------------------------------------------
MeanSet<CirclePoint> intrinsic_mean_exact(
    const EmpiricalMeasure<CirclePoint>& sample);

// Grid oracle for the exact solver: minimizes over a uniform grid of size
// `grid_size` and refines every near-optimal cluster by golden section.
// Evaluates the Frechet function directly and shares no code path with
// intrinsic_mean_exact.
MeanSet<CirclePoint> brute_force_mean(const EmpiricalMeasure<CirclePoint>& sample,
                                      std::size_t grid_size);

// ---------------------------------------------------------------------------
// Example densities
// ---------------------------------------------------------------------------

// Piecewise density on [-pi, pi). Factories build the smeary example families
// and the antipodal-plateau family used for the CLT-constant experiments.
class CircleDensity {
 public:
  enum class Kind { PowerSmeary, LogSmeary, Plateau, Custom };

  struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> f;
  };

  // Uniform bulk on [-1/2, 1/2] plus tails 1 - (pi - |x|)^r on the unit arcs
  // adjacent to the antipode; power smeary of order r.
  static CircleDensity power_smeary(double r);

  // Uniform bulk of height c_r on [-1/2, 1/2] plus tails
  // max(1 - G_r'(pi - |x|), 0) / (2 pi) with G_r(u) = exp(-1/u^r); c_r is
  // solved from total mass 1 by quadrature.
  static CircleDensity log_smeary(double r);

  // Two uniform bulk arcs centered at +-center of half-width `half_width`
  // plus uniform tails of height `tail_height` on the arcs of length
  // `tail_width` adjacent to the antipode. The bulk height is solved from
  // total mass 1. center = 0 gives a single bulk arc.
  static CircleDensity antipodal_plateau(double center, double half_width,
                                         double tail_width,
                                         double tail_height);

  static CircleDensity custom(std::vector<Piece> pieces);

  double operator()(double x) const;
  double sup() const { return sup_; }
  Kind kind() const { return kind_; }
  double smeary_order() const { return r_; }
  double log_normalizer() const { return c_r_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  // Adaptive-quadrature integrals of f and of g * f over the support.
  double total_mass() const;
  double integrate(const std::function<double(double)>& g) const;
  // Euclidean variance E[X^2] of the (symmetric) density.
  double second_moment() const;

 private:
  CircleDensity() = default;
  void validate() const;

  Kind kind_ = Kind::Custom;
  double r_ = 0.0;
  double c_r_ = 0.0;
  double center_ = 0.0, half_width_ = 0.0, tail_width_ = 0.0,
         tail_height_ = 0.0, bulk_height_ = 0.0;
  double sup_ = 0.0;
  std::vector<Piece> pieces_;
};

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

std::vector<CirclePoint> sample_power_smeary(double r, std::size_t n,
                                             std::uint64_t seed);
std::vector<CirclePoint> sample_power_smeary(double r, std::size_t n,
                                             RngStream& rng);
std::vector<CirclePoint> sample_log_smeary(double r, std::size_t n,
                                           std::uint64_t seed);
std::vector<CirclePoint> sample_log_smeary(double r, std::size_t n,
                                           RngStream& rng);

Sampler<CirclePoint> power_smeary_sampler(double r);
Sampler<CirclePoint> log_smeary_sampler(double r);
Sampler<CirclePoint> plateau_sampler(double center, double half_width,
                                     double tail_width, double tail_height);
Sampler<CirclePoint> uniform_sampler();
Sampler<CirclePoint> uniform_interval_sampler(double lo, double hi);
Sampler<CirclePoint> wrapped_normal_sampler(double sigma);
Sampler<CirclePoint> dirac_sampler(CirclePoint at);

// Rejection sampler against the uniform proposal on [-pi, pi) with a flat
// envelope at the density's sup.
std::vector<CirclePoint> rejection_sample(const CircleDensity& density,
                                          std::size_t n, RngStream& rng);

// ---------------------------------------------------------------------------
// CLT statistics
// ---------------------------------------------------------------------------

// Modulus G governing the antipodal density expansion
// f(-pi + eps) = 1/(2 pi) - G'(eps) + o(G'(eps)).
struct SmearyModulus {
  std::function<double(double)> G;
  std::function<double(double)> G_prime;
  double delta = 1.0;

  // G(eps) = eps^(r+1) / (2 pi (r+1)), domain [0, 1).
  static SmearyModulus power(double r);
  // G_r(eps) = exp(-1/eps^r), domain [0, 1/2).
  static SmearyModulus logarithmic(double r);
};

// Asymptotic variance sigma^2 (1 - 2 pi f(-pi))^(-2) of sqrt(n) mean_n in the
// sub-uniform antipodal regime f(-pi) < 1/(2 pi).
double clt_variance_part_i(double sigma2, double f_antipode);

// Rescaled statistic sqrt(n) sign(mean) 2 pi G(|mean|).
double rescaled_statistic_part_ii(const CirclePoint& mean_estimate,
                                  const SmearyModulus& modulus, std::size_t n);

}  // namespace frechetlab::circle
