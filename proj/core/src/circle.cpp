#include "frechetlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "frechetlab/errors.hpp"
#include "frechetlab/numerics.hpp"

namespace frechetlab::circle {

namespace {

constexpr double kTieTol = 1e-10;      // Frechet-value tie band
constexpr double kMergeTol = 1e-9;     // minimizer dedup distance

// Sorts candidate minimizers, merges duplicates within kMergeTol (including
// across the -pi/pi seam) and assembles the MeanSet.
MeanSet<CirclePoint> assemble_mean_set(std::vector<std::pair<double, double>>
                                           candidates /* (angle, value) */,
                                       double best) {
  const double tie = kTieTol * std::max(1.0, std::abs(best));
  std::vector<std::pair<double, double>> kept;
  for (const auto& c : candidates) {
    if (c.second <= best + tie) kept.emplace_back(wrap_angle(c.first), c.second);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<CirclePoint> minimizers;
  std::size_t i = 0;
  while (i < kept.size()) {
    std::size_t j = i;
    double rep = kept[i].first;
    double rep_val = kept[i].second;
    while (j + 1 < kept.size() && kept[j + 1].first - kept[j].first <= kMergeTol) {
      ++j;
      if (kept[j].second < rep_val) {
        rep = kept[j].first;
        rep_val = kept[j].second;
      }
    }
    minimizers.emplace_back(rep);
    i = j + 1;
  }
  // merge across the seam
  if (minimizers.size() > 1) {
    const double span = (minimizers.back().angle - minimizers.front().angle);
    if (kTwoPi - span <= kMergeTol) minimizers.pop_back();
  }

  CircleSpace space;
  return make_mean_set(space, std::move(minimizers), best);
}

}  // namespace

MeanSet<CirclePoint> intrinsic_mean_exact(
    const EmpiricalMeasure<CirclePoint>& sample) {
  const std::size_t n = sample.size();

  // atoms sorted by antipode position; the sweep flips one branch per break
  struct Node {
    double antipode;
    double atom;
    double weight;
  };
  std::vector<Node> nodes(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = {antipode(sample.atoms[j].angle), sample.atoms[j].angle,
                sample.weights[j]};
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.antipode < b.antipode; });

  // Representatives of each atom for x just past the sweep start b0. Atoms
  // whose antipode is exactly b0 sit on the ahead branch b0 + pi and never
  // flip; all others start on the behind branch and flip by +2*pi when the
  // sweep crosses their antipode.
  const double b0 = nodes[0].antipode;
  std::vector<double> rep(n);
  CompensatedSum s, ss;
  for (std::size_t j = 0; j < n; ++j) {
    if (nodes[j].antipode == b0) {
      rep[j] = b0 + kPi;
    } else {
      double delta = nodes[j].atom - b0;
      delta -= kTwoPi * std::floor((delta + kPi) / kTwoPi);  // into [-pi, pi)
      rep[j] = b0 + delta;
    }
    s.add(nodes[j].weight * rep[j]);
    ss.add(nodes[j].weight * rep[j] * rep[j]);
  }

  std::vector<std::pair<double, double>> candidates;
  candidates.reserve(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = nodes[i].antipode;
    const double hi = (i + 1 < n) ? nodes[i + 1].antipode : b0 + kTwoPi;
    if (hi > lo) {
      const double mean = s.value();
      const double v = std::clamp(mean, lo, hi);
      const double value =
          std::max(v * v - 2.0 * v * mean + ss.value(), 0.0);
      candidates.emplace_back(v, value);
      best = std::min(best, value);
    }
    if (i + 1 < n && nodes[i + 1].antipode > b0) {
      // crossing the antipode of atom i+1 shifts its representative by 2*pi
      const double w = nodes[i + 1].weight;
      const double old = rep[i + 1];
      s.add(kTwoPi * w);
      ss.add(w * (2.0 * kTwoPi * old + kTwoPi * kTwoPi));
      rep[i + 1] = old + kTwoPi;
    }
  }

  return assemble_mean_set(std::move(candidates), best);
}

MeanSet<CirclePoint> brute_force_mean(
    const EmpiricalMeasure<CirclePoint>& sample, std::size_t grid_size) {
  if (grid_size < 1000) throw InvalidInput("brute force grid needs >= 1000 points");
  const std::size_t n = sample.size();
  const double step = kTwoPi / static_cast<double>(grid_size);

  std::vector<double> values(grid_size, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = sample.atoms[j].angle;
    const double w = sample.weights[j];
    for (std::size_t g = 0; g < grid_size; ++g) {
      const double x = -kPi + step * static_cast<double>(g);
      double d = std::abs(x - a);
      d = std::min(d, kTwoPi - d);
      values[g] += w * d * d;
    }
  }

  auto objective = [&](double raw) {
    const double x = wrap_angle(raw);  // refinement brackets may cross the seam
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double d = std::abs(x - sample.atoms[j].angle);
      d = std::min(d, kTwoPi - d);
      f += sample.weights[j] * d * d;
    }
    return f;
  };

  const double grid_best = *std::min_element(values.begin(), values.end());
  const double band = step * step + 1e-10 * std::max(1.0, std::abs(grid_best));

  // contiguous near-optimal runs; the first and last merge across the seam
  struct Run {
    long long lo, hi;  // inclusive grid indices on the unwrapped axis
  };
  std::vector<Run> runs;
  for (long long g = 0; g < static_cast<long long>(grid_size); ++g) {
    if (values[static_cast<std::size_t>(g)] > grid_best + band) continue;
    if (!runs.empty() && runs.back().hi + 1 == g) {
      runs.back().hi = g;
    } else {
      runs.push_back({g, g});
    }
  }
  const long long gs = static_cast<long long>(grid_size);
  if (runs.size() > 1 && runs.front().lo == 0 && runs.back().hi == gs - 1) {
    runs.front().lo = runs.back().lo - gs;
    runs.pop_back();
  }

  std::vector<std::pair<double, double>> candidates;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& run : runs) {
    const double x_lo = -kPi + step * (static_cast<double>(run.lo) - 1.0);
    const double x_hi = -kPi + step * (static_cast<double>(run.hi) + 1.0);
    const auto [x, fx] = golden_section_min(objective, x_lo, x_hi, 1e-10);
    candidates.emplace_back(x, fx);
    best = std::min(best, fx);
  }

  return assemble_mean_set(std::move(candidates), best);
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

namespace {

double pow_r(double u, double r) {
  if (r == 1.0) return u;
  if (r == 2.0) return u * u;
  return std::pow(u, r);
}

// derivative of exp(-1/u^r) for u > 0
double log_modulus_prime(double u, double r) {
  if (u <= 0.0) return 0.0;
  return r * std::exp(-1.0 / pow_r(u, r)) / (pow_r(u, r) * u);
}

}  // namespace

CircleDensity CircleDensity::power_smeary(double r) {
  if (!(r > 0.0)) throw InvalidInput("power smeary needs r > 0");
  CircleDensity d;
  d.kind_ = Kind::PowerSmeary;
  d.r_ = r;
  const double bulk = ((kPi - 1.0) * r + kPi) / (kPi * r + kPi);
  d.bulk_height_ = bulk;
  d.sup_ = std::max(bulk, kUniformDensity);
  d.pieces_ = {
      {-kPi, -kPi + 1.0,
       [r](double x) { return kUniformDensity * (1.0 - pow_r(kPi + x, r)); }},
      {-0.5, 0.5, [bulk](double) { return bulk; }},
      {kPi - 1.0, kPi,
       [r](double x) { return kUniformDensity * (1.0 - pow_r(kPi - x, r)); }},
  };
  d.validate();
  return d;
}

CircleDensity CircleDensity::log_smeary(double r) {
  if (!(r > 0.0)) throw InvalidInput("log smeary needs r > 0");
  CircleDensity d;
  d.kind_ = Kind::LogSmeary;
  d.r_ = r;
  auto tail = [r](double u) {
    return std::max(1.0 - log_modulus_prime(u, r), 0.0) * kUniformDensity;
  };
  const double tail_mass =
      2.0 * adaptive_simpson([&](double u) { return tail(u); }, 0.0, 0.5, 1e-13);
  const double c_r = 1.0 - tail_mass;
  if (!(c_r > kUniformDensity) || !std::isfinite(c_r)) {
    throw InvalidDensity("log smeary normalizer outside (1/(2 pi), inf)");
  }
  d.c_r_ = c_r;
  d.bulk_height_ = c_r;
  d.sup_ = std::max(c_r, kUniformDensity);
  d.pieces_ = {
      {-kPi, -kPi + 0.5, [tail](double x) { return tail(kPi + x); }},
      {-0.5, 0.5, [c_r](double) { return c_r; }},
      {kPi - 0.5, kPi, [tail](double x) { return tail(kPi - x); }},
  };
  d.validate();
  return d;
}

CircleDensity CircleDensity::antipodal_plateau(double center, double half_width,
                                               double tail_width,
                                               double tail_height) {
  if (!(half_width > 0.0) || center < 0.0 || !(tail_width > 0.0)) {
    throw InvalidInput("plateau needs positive widths and center >= 0");
  }
  if (tail_height < 0.0 || tail_height >= kUniformDensity) {
    throw InvalidInput("plateau tail height must lie in [0, 1/(2 pi))");
  }
  if (center + half_width >= kPi - tail_width) {
    throw InvalidInput("plateau bulk overlaps the antipodal tails");
  }
  CircleDensity d;
  d.kind_ = Kind::Plateau;
  d.center_ = center;
  d.half_width_ = half_width;
  d.tail_width_ = tail_width;
  d.tail_height_ = tail_height;
  const double bulk_lo = std::max(0.0, center - half_width);
  const double bulk_len = 2.0 * ((center + half_width) - bulk_lo);
  const double bulk_mass = 1.0 - 2.0 * tail_width * tail_height;
  if (!(bulk_mass > 0.0)) throw InvalidInput("plateau tails carry full mass");
  const double h = bulk_mass / bulk_len;
  d.bulk_height_ = h;
  d.sup_ = std::max(h, tail_height);
  if (center - half_width > 0.0) {
    d.pieces_ = {
        {-kPi, -kPi + tail_width, [tail_height](double) { return tail_height; }},
        {-center - half_width, -center + half_width,
         [h](double) { return h; }},
        {center - half_width, center + half_width, [h](double) { return h; }},
        {kPi - tail_width, kPi, [tail_height](double) { return tail_height; }},
    };
  } else {
    d.pieces_ = {
        {-kPi, -kPi + tail_width, [tail_height](double) { return tail_height; }},
        {-(center + half_width), center + half_width,
         [h](double) { return h; }},
        {kPi - tail_width, kPi, [tail_height](double) { return tail_height; }},
    };
  }
  d.validate();
  return d;
}

CircleDensity CircleDensity::custom(std::vector<Piece> pieces) {
  CircleDensity d;
  d.kind_ = Kind::Custom;
  d.pieces_ = std::move(pieces);
  double sup = 0.0;
  for (const auto& p : d.pieces_) {
    const int kProbe = 257;
    for (int i = 0; i <= kProbe; ++i) {
      const double x = p.lo + (p.hi - p.lo) * i / kProbe;
      sup = std::max(sup, p.f(x));
    }
  }
  d.sup_ = sup;
  d.validate();
  return d;
}

double CircleDensity::operator()(double x) const {
  switch (kind_) {
    case Kind::PowerSmeary: {
      const double ax = std::abs(x);
      if (ax <= 0.5) return bulk_height_;
      if (ax >= kPi - 1.0 && ax <= kPi) {
        return kUniformDensity * (1.0 - pow_r(kPi - ax, r_));
      }
      return 0.0;
    }
    case Kind::LogSmeary: {
      const double ax = std::abs(x);
      if (ax <= 0.5) return c_r_;
      if (ax >= kPi - 0.5 && ax <= kPi) {
        return std::max(1.0 - log_modulus_prime(kPi - ax, r_), 0.0) *
               kUniformDensity;
      }
      return 0.0;
    }
    case Kind::Plateau: {
      const double ax = std::abs(x);
      if (std::abs(ax - center_) <= half_width_) return bulk_height_;
      if (ax >= kPi - tail_width_ && ax <= kPi) return tail_height_;
      return 0.0;
    }
    case Kind::Custom:
      for (const auto& p : pieces_) {
        if (x >= p.lo && x <= p.hi) return p.f(x);
      }
      return 0.0;
  }
  return 0.0;
}

double CircleDensity::total_mass() const {
  return integrate([](double) { return 1.0; });
}

double CircleDensity::integrate(const std::function<double(double)>& g) const {
  double total = 0.0;
  for (const auto& p : pieces_) {
    total += adaptive_simpson(
        [&](double x) { return g(x) * (*this)(x); }, p.lo, p.hi, 1e-13);
  }
  return total;
}

double CircleDensity::second_moment() const {
  return integrate([](double x) { return x * x; });
}

void CircleDensity::validate() const {
  const double mass = total_mass();
  if (std::abs(mass - 1.0) > 1e-6) {
    throw InvalidDensity("density mass " + std::to_string(mass) +
                         " deviates from 1 beyond 1e-6");
  }
  for (const auto& p : pieces_) {
    const int kProbe = 101;
    for (int i = 0; i <= kProbe; ++i) {
      const double x = p.lo + (p.hi - p.lo) * i / kProbe;
      if ((*this)(x) < 0.0) throw InvalidDensity("negative density");
    }
  }
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

std::vector<CirclePoint> rejection_sample(const CircleDensity& density,
                                          std::size_t n, RngStream& rng) {
  std::vector<CirclePoint> out;
  out.reserve(n);
  const double sup = density.sup();
  while (out.size() < n) {
    const double x = rng.uniform(-kPi, kPi);
    if (rng.u01() * sup <= density(x)) out.emplace_back(x);
  }
  return out;
}

std::vector<CirclePoint> sample_power_smeary(double r, std::size_t n,
                                             RngStream& rng) {
  const CircleDensity d = CircleDensity::power_smeary(r);
  return rejection_sample(d, n, rng);
}

std::vector<CirclePoint> sample_power_smeary(double r, std::size_t n,
                                             std::uint64_t seed) {
  RngStream rng = RngStream::for_replication(seed, 0);
  return sample_power_smeary(r, n, rng);
}

std::vector<CirclePoint> sample_log_smeary(double r, std::size_t n,
                                           RngStream& rng) {
  const CircleDensity d = CircleDensity::log_smeary(r);
  return rejection_sample(d, n, rng);
}

std::vector<CirclePoint> sample_log_smeary(double r, std::size_t n,
                                           std::uint64_t seed) {
  RngStream rng = RngStream::for_replication(seed, 0);
  return sample_log_smeary(r, n, rng);
}

Sampler<CirclePoint> power_smeary_sampler(double r) {
  CircleDensity d = CircleDensity::power_smeary(r);
  return {"circle.pow[r=" + std::to_string(r) + "]",
          [d](std::size_t n, RngStream& rng) {
            return rejection_sample(d, n, rng);
          }};
}

Sampler<CirclePoint> log_smeary_sampler(double r) {
  CircleDensity d = CircleDensity::log_smeary(r);
  return {"circle.log[r=" + std::to_string(r) + "]",
          [d](std::size_t n, RngStream& rng) {
            return rejection_sample(d, n, rng);
          }};
}

Sampler<CirclePoint> plateau_sampler(double center, double half_width,
                                     double tail_width, double tail_height) {
  const CircleDensity d = CircleDensity::antipodal_plateau(
      center, half_width, tail_width, tail_height);
  // exact mixture of uniform pieces
  struct Segment {
    double lo, hi, cum;
  };
  std::vector<Segment> segments;
  double cum = 0.0;
  for (const auto& p : d.pieces()) {
    const double mass = (p.hi - p.lo) * p.f(0.5 * (p.lo + p.hi));
    cum += mass;
    segments.push_back({p.lo, p.hi, cum});
  }
  const double total = cum;
  return {"circle.plateau[c=" + std::to_string(center) + "]",
          [segments, total](std::size_t n, RngStream& rng) {
            std::vector<CirclePoint> out;
            out.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
              const double u = rng.u01() * total;
              const Segment* seg = &segments.back();
              for (const auto& s : segments) {
                if (u <= s.cum) {
                  seg = &s;
                  break;
                }
              }
              out.emplace_back(rng.uniform(seg->lo, seg->hi));
            }
            return out;
          }};
}

Sampler<CirclePoint> uniform_sampler() {
  return {"circle.uniform", [](std::size_t n, RngStream& rng) {
            std::vector<CirclePoint> out;
            out.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
              out.emplace_back(rng.uniform(-kPi, kPi));
            }
            return out;
          }};
}

Sampler<CirclePoint> uniform_interval_sampler(double lo, double hi) {
  if (!(hi > lo)) throw InvalidInput("interval sampler needs hi > lo");
  return {"circle.uniform_interval", [lo, hi](std::size_t n, RngStream& rng) {
            std::vector<CirclePoint> out;
            out.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
              out.emplace_back(rng.uniform(lo, hi));
            }
            return out;
          }};
}

Sampler<CirclePoint> wrapped_normal_sampler(double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("wrapped normal needs sigma > 0");
  return {"circle.wrapped_normal[sigma=" + std::to_string(sigma) + "]",
          [sigma](std::size_t n, RngStream& rng) {
            std::vector<CirclePoint> out;
            out.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
              out.emplace_back(sigma * rng.normal());
            }
            return out;
          }};
}

Sampler<CirclePoint> dirac_sampler(CirclePoint at) {
  return {"circle.dirac", [at](std::size_t n, RngStream&) {
            return std::vector<CirclePoint>(n, at);
          }};
}

// ---------------------------------------------------------------------------
// CLT statistics
// ---------------------------------------------------------------------------

SmearyModulus SmearyModulus::power(double r) {
  if (!(r > 0.0)) throw InvalidInput("power modulus needs r > 0");
  SmearyModulus m;
  m.G = [r](double eps) { return pow_r(eps, r + 1.0) / (kTwoPi * (r + 1.0)); };
  m.G_prime = [r](double eps) { return pow_r(eps, r) / kTwoPi; };
  m.delta = 1.0;
  return m;
}

SmearyModulus SmearyModulus::logarithmic(double r) {
  if (!(r > 0.0)) throw InvalidInput("log modulus needs r > 0");
  SmearyModulus m;
  m.G = [r](double eps) {
    return eps > 0.0 ? std::exp(-1.0 / pow_r(eps, r)) : 0.0;
  };
  m.G_prime = [r](double eps) { return log_modulus_prime(eps, r); };
  m.delta = 0.5;
  return m;
}

double clt_variance_part_i(double sigma2, double f_antipode) {
  if (f_antipode < 0.0 || f_antipode >= kUniformDensity) {
    throw OutOfRegime("part (i) needs 0 <= f(-pi) < 1/(2 pi)");
  }
  const double factor = 1.0 - kTwoPi * f_antipode;
  return sigma2 / (factor * factor);
}

double rescaled_statistic_part_ii(const CirclePoint& mean_estimate,
                                  const SmearyModulus& modulus,
                                  std::size_t n) {
  const double a = std::abs(mean_estimate.angle);
  if (a >= modulus.delta) {
    throw OutOfDomain("mean estimate outside the modulus domain");
  }
  const double sign =
      mean_estimate.angle > 0.0 ? 1.0 : (mean_estimate.angle < 0.0 ? -1.0 : 0.0);
  return std::sqrt(static_cast<double>(n)) * sign * kTwoPi * modulus.G(a);
}

}  // namespace frechetlab::circle
