#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace frechetlab {

// One SplitMix64 step; used to turn (seed, replication) into a stream key.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic per-replication random stream. Replication r of an experiment
// with master seed s always sees the same stream, independent of how the work
// is scheduled across threads.
class RngStream {
 public:
  static RngStream for_replication(std::uint64_t seed,
                                   std::uint64_t replication) {
    std::uint64_t state = seed;
    (void)splitmix64(state);
    state ^= 0xd1342543de82ef95ull * (replication + 1);
    std::uint64_t key = splitmix64(state);
    key ^= splitmix64(state);
    return RngStream(key);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double u01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Standard normal via Marsaglia's polar method (spare value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(u01() * static_cast<double>(n)) % n;
  }

  bool bernoulli(double prob) { return u01() < prob; }

 private:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace frechetlab
