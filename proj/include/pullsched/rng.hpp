#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace pullsched {

// mt19937_64 output is pinned by the standard, but the <random> distributions
// are not; the draws below are spelled out so identical seeds give identical
// streams on any toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  int int_in(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double real_in(double lo, double hi) { return lo + (hi - lo) * real01(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent sub-stream keyed on this Rng's seed; used to decouple e.g.
  // overlay construction from scheduling noise.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pullsched
