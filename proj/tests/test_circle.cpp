#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "frechetlab/circle.hpp"
#include "frechetlab/core.hpp"
#include "frechetlab/errors.hpp"
#include "frechetlab/numerics.hpp"

using namespace frechetlab;
using namespace frechetlab::circle;

namespace {

EmpiricalMeasure<CirclePoint> measure_of(std::initializer_list<double> angles) {
  std::vector<CirclePoint> atoms;
  for (double a : angles) atoms.emplace_back(a);
  return EmpiricalMeasure<CirclePoint>::uniform(std::move(atoms));
}

std::vector<CirclePoint> random_sample(RngStream& rng, std::size_t n) {
  // mixed data: clusters, near-antipodal pairs, uniform scatter
  std::vector<CirclePoint> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.u01();
    if (u < 0.4) {
      atoms.emplace_back(0.3 * rng.normal());
    } else if (u < 0.6) {
      atoms.emplace_back(kPi + 0.2 * rng.normal());
    } else {
      atoms.emplace_back(rng.uniform(-kPi, kPi));
    }
  }
  return atoms;
}

}  // namespace

TEST_SUITE_BEGIN("circle");

TEST_CASE("arc distance basics") {
  CHECK(arc_distance(CirclePoint(0.1), CirclePoint(-0.2)) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(arc_distance(CirclePoint(kPi - 0.1), CirclePoint(-kPi + 0.1)) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(arc_distance(CirclePoint(0.0), CirclePoint(-kPi)) ==
        doctest::Approx(kPi));
}

TEST_CASE("circle metric axioms on random triples") {
  CircleSpace space;
  RngStream rng = RngStream::for_replication(11, 0);
  for (int i = 0; i < 1000; ++i) {
    CirclePoint a(rng.uniform(-kPi, kPi));
    CirclePoint b(rng.uniform(-kPi, kPi));
    CirclePoint c(rng.uniform(-kPi, kPi));
    CHECK(space.distance(a, a) == 0.0);
    CHECK(space.distance(a, b) == space.distance(b, a));
    CHECK(space.distance(a, c) <=
          space.distance(a, b) + space.distance(b, c) + 1e-9);
  }
}

TEST_CASE("exact mean: symmetric three-point sample") {
  const auto set = intrinsic_mean_exact(measure_of({-kPi / 2, 0.0, kPi / 2}));
  REQUIRE(set.minimizers.size() == 1);
  CHECK(set.minimizers[0].angle == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(set.unique);
}

TEST_CASE("exact mean: antipodal-neighborhood pair lands on the seam") {
  const auto set = intrinsic_mean_exact(measure_of({kPi - 0.1, -kPi + 0.1}));
  REQUIRE(set.minimizers.size() == 1);
  CHECK(arc_distance(set.minimizers[0], CirclePoint(-kPi)) < 1e-12);
  CHECK(set.frechet_value == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("exact mean: singleton is honest") {
  const auto set = intrinsic_mean_exact(measure_of({0.77}));
  REQUIRE(set.minimizers.size() == 1);
  CHECK(set.minimizers[0].angle == doctest::Approx(0.77));
  CHECK(set.frechet_value == doctest::Approx(0.0));
}

TEST_CASE("exact mean: weighted sample reduces to weighted average") {
  std::vector<CirclePoint> atoms{CirclePoint(0.0), CirclePoint(1.0)};
  EmpiricalMeasure<CirclePoint> mu(std::move(atoms), {0.75, 0.25});
  const auto set = intrinsic_mean_exact(mu);
  REQUIRE(set.minimizers.size() == 1);
  CHECK(set.minimizers[0].angle == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("brute force oracle on a singleton") {
  const auto set = brute_force_mean(measure_of({0.3}), 2000);
  REQUIRE(!set.minimizers.empty());
  CHECK(set.minimizers[0].angle == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("brute force rejects tiny grids") {
  CHECK_THROWS_AS(brute_force_mean(measure_of({0.3}), 10), InvalidInput);
}

TEST_CASE("two antipodal atoms have two tied minimizers") {
  const auto exact = intrinsic_mean_exact(measure_of({-kPi / 2, kPi / 2}));
  REQUIRE(exact.minimizers.size() == 2);
  CHECK(arc_distance(exact.minimizers[0], CirclePoint(-kPi)) < 1e-12);
  CHECK(arc_distance(exact.minimizers[1], CirclePoint(0.0)) < 1e-12);
  CHECK(exact.frechet_value == doctest::Approx(kPi * kPi / 4.0));
  CHECK(!exact.unique);
  CHECK(exact.diameter == doctest::Approx(kPi));
  CHECK(arc_distance(measurable_selection(exact), CirclePoint(-kPi)) < 1e-12);

  const auto oracle = brute_force_mean(measure_of({-kPi / 2, kPi / 2}), 4096);
  REQUIRE(oracle.minimizers.size() == 2);
  CHECK(oracle.frechet_value == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-9));
}

TEST_CASE("exact solver agrees with the grid oracle on random samples") {
  RngStream rng = RngStream::for_replication(2024, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(20);
    auto mu = EmpiricalMeasure<CirclePoint>::uniform(random_sample(rng, n));
    const auto exact = intrinsic_mean_exact(mu);
    const auto oracle = brute_force_mean(mu, 4096);
    CHECK(std::abs(exact.frechet_value - oracle.frechet_value) < 1e-8);
    // every exact minimizer matches some refined oracle minimizer
    for (const auto& m : exact.minimizers) {
      double closest = kPi;
      for (const auto& o : oracle.minimizers) {
        closest = std::min(closest, arc_distance(m, o));
      }
      CHECK(closest < 1e-5);
    }
  }
}

TEST_CASE("mean set values re-evaluate consistently") {
  RngStream rng = RngStream::for_replication(77, 0);
  CircleSpace space;
  const auto rho = squared_distance_rho(space);
  for (int trial = 0; trial < 50; ++trial) {
    auto mu = EmpiricalMeasure<CirclePoint>::uniform(random_sample(rng, 30));
    const auto set = intrinsic_mean_exact(mu);
    for (const auto& m : set.minimizers) {
      CHECK(std::abs(frechet_value(rho, mu, m) - set.frechet_value) < 1e-9);
    }
  }
}

TEST_CASE("rotation equivariance of the exact solver") {
  RngStream rng = RngStream::for_replication(5150, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto atoms = random_sample(rng, 17);
    const double theta = rng.uniform(-kPi, kPi);
    std::vector<CirclePoint> rotated;
    for (const auto& a : atoms) rotated.emplace_back(a.angle + theta);
    const auto base =
        intrinsic_mean_exact(EmpiricalMeasure<CirclePoint>::uniform(atoms));
    const auto rot = intrinsic_mean_exact(
        EmpiricalMeasure<CirclePoint>::uniform(std::move(rotated)));
    REQUIRE(base.minimizers.size() == rot.minimizers.size());
    for (const auto& m : base.minimizers) {
      const CirclePoint expected(m.angle + theta);
      double closest = kPi;
      for (const auto& r : rot.minimizers) {
        closest = std::min(closest, arc_distance(expected, r));
      }
      CHECK(closest < 1e-12);
    }
  }
}

TEST_CASE("power smeary density normalizes for several orders") {
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const auto d = CircleDensity::power_smeary(r);
    CHECK(std::abs(d.total_mass() - 1.0) < 1e-6);
    // closed-form telescoping of bulk + tails
    const double bulk = ((kPi - 1.0) * r + kPi) / (kPi * r + kPi);
    const double tails = 2.0 * (r / (kTwoPi * (r + 1.0)));
    CHECK(bulk + tails == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("power smeary draws stay inside the density support") {
  const auto draws = sample_power_smeary(1.0, 5000, std::uint64_t{42});
  std::size_t bulk_hits = 0;
  std::size_t upper_tail = 0;
  for (const auto& x : draws) {
    const double a = x.angle;
    const bool in_bulk = std::abs(a) <= 0.5;
    const bool in_tail = a >= kPi - 1.0 || a <= -kPi + 1.0;
    CHECK((in_bulk || in_tail));
    bulk_hits += in_bulk;
    upper_tail += a >= kPi - 1.0;
  }
  const double n = static_cast<double>(draws.size());
  const double bulk_mass = ((kPi - 1.0) * 1.0 + kPi) / (kPi * 1.0 + kPi);
  const double se_bulk = std::sqrt(bulk_mass * (1.0 - bulk_mass) / n);
  CHECK(std::abs(static_cast<double>(bulk_hits) / n - bulk_mass) <
        3.0 * se_bulk);

  // per-side tail mass from the quadrature oracle (r = 1 gives 1/(4 pi))
  const auto d = CircleDensity::power_smeary(1.0);
  const double side = adaptive_simpson(
      [&](double x) { return d(x); }, kPi - 1.0, kPi, 1e-12);
  CHECK(side == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-9));
  const double se_side = std::sqrt(side * (1.0 - side) / n);
  CHECK(std::abs(static_cast<double>(upper_tail) / n - side) < 3.0 * se_side);
}

TEST_CASE("log smeary normalizer and sampling") {
  const auto d = CircleDensity::log_smeary(1.0);
  CHECK(d.log_normalizer() > kUniformDensity);
  CHECK(std::abs(d.total_mass() - 1.0) < 1e-6);

  const auto draws = sample_log_smeary(1.0, 5000, std::uint64_t{7});
  double mean = 0.0;
  for (const auto& x : draws) mean += x.angle;
  mean /= static_cast<double>(draws.size());
  const double sigma = std::sqrt(d.second_moment());
  CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(5000.0));
}

TEST_CASE("antipodal density of computed means stays sub-uniform") {
  std::vector<CircleDensity> densities;
  densities.push_back(CircleDensity::power_smeary(1.0));
  densities.push_back(CircleDensity::power_smeary(2.0));
  densities.push_back(CircleDensity::log_smeary(1.0));
  densities.push_back(CircleDensity::antipodal_plateau(1.2, 0.3, 0.5,
                                                       1.0 / (4.0 * kPi)));
  std::vector<Sampler<CirclePoint>> samplers;
  samplers.push_back(power_smeary_sampler(1.0));
  samplers.push_back(power_smeary_sampler(2.0));
  samplers.push_back(log_smeary_sampler(1.0));
  samplers.push_back(plateau_sampler(1.2, 0.3, 0.5, 1.0 / (4.0 * kPi)));

  for (std::size_t i = 0; i < densities.size(); ++i) {
    RngStream rng = RngStream::for_replication(900 + i, 0);
    auto sample = samplers[i].draw(2000, rng);
    const auto set = intrinsic_mean_exact(
        EmpiricalMeasure<CirclePoint>::uniform(std::move(sample)));
    for (const auto& m : set.minimizers) {
      CHECK(densities[i](antipode(m.angle)) <= kUniformDensity + 1e-9);
    }
  }
}

TEST_CASE("plateau density pins the antipodal value") {
  const double q = 1.0 / (4.0 * kPi);
  const auto d = CircleDensity::antipodal_plateau(1.2, 0.3, 0.5, q);
  CHECK(d(-kPi) == doctest::Approx(q));
  CHECK(d(kPi - 0.25) == doctest::Approx(q));
  CHECK(std::abs(d.total_mass() - 1.0) < 1e-9);
  // population mean is unique at zero: scan the population Frechet function
  const auto pop_f = [&](double x) {
    return d.integrate([&](double y) {
      double diff = std::abs(x - y);
      diff = std::min(diff, kTwoPi - diff);
      return diff * diff;
    });
  };
  const double f0 = pop_f(0.0);
  for (double x = 0.15; x < kPi + 1e-9; x += 0.15) {
    CHECK(pop_f(x) > f0 + 1e-6);
  }
}

TEST_CASE("part (i) variance formula") {
  CHECK(clt_variance_part_i(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(clt_variance_part_i(1.0, 1.0 / (4.0 * kPi)) == doctest::Approx(4.0));
  CHECK(clt_variance_part_i(2.0, 1.0 / (4.0 * kPi)) == doctest::Approx(8.0));
  CHECK_THROWS_AS(clt_variance_part_i(2.0, kUniformDensity), OutOfRegime);
  CHECK_THROWS_AS(clt_variance_part_i(1.0, 0.3), OutOfRegime);
}

TEST_CASE("part (ii) rescaled statistic") {
  const auto modulus = SmearyModulus::power(1.0);
  CHECK(rescaled_statistic_part_ii(CirclePoint(0.0), modulus, 100) == 0.0);
  CHECK(rescaled_statistic_part_ii(CirclePoint(0.1), modulus, 10000) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rescaled_statistic_part_ii(CirclePoint(-0.1), modulus, 10000) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(
      rescaled_statistic_part_ii(CirclePoint(1.2), modulus, 100), OutOfDomain);
}

TEST_CASE("smeary moduli are convex with vanishing value and slope at zero") {
  for (const auto& modulus :
       {SmearyModulus::power(1.0), SmearyModulus::power(2.0),
        SmearyModulus::logarithmic(1.0)}) {
    CHECK(modulus.G(0.0) == doctest::Approx(0.0));
    CHECK(modulus.G_prime(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    const double hi = 0.9 * modulus.delta;
    for (int i = 1; i + 1 < 20; ++i) {
      const double a = hi * i / 20.0;
      const double b = hi * (i + 2) / 20.0;
      CHECK(modulus.G(0.5 * (a + b)) <= 0.5 * (modulus.G(a) + modulus.G(b)) + 1e-15);
    }
  }
}

TEST_CASE("log smeary rescaled mean concentrates near plus/minus one") {
  // statistic (log sqrt(n))^(1/r) * mean_n, r = 1
  const std::size_t n = 250000;
  const double scale = std::log(std::sqrt(static_cast<double>(n)));
  std::vector<double> stats;
  for (std::size_t rep = 0; rep < 40; ++rep) {
    RngStream rng = RngStream::for_replication(31337, rep);
    auto sample = sample_log_smeary(1.0, n, rng);
    const auto set = intrinsic_mean_exact(
        EmpiricalMeasure<CirclePoint>::uniform(std::move(sample)));
    stats.push_back(scale * std::abs(measurable_selection(set).angle));
  }
  std::nth_element(stats.begin(), stats.begin() + stats.size() / 2,
                   stats.end());
  const double median = stats[stats.size() / 2];
  CHECK(median > 0.6);
  CHECK(median < 1.4);
}

TEST_SUITE_END();
