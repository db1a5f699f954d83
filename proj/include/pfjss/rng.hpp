#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pfjss {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream key derived from a base seed and a tag path, e.g.
// stream_key(seed, {kSetupStream, job, op}).
inline std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(seed);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

/// mt19937_64 with distribution code written out so draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    double v = lo + (hi - lo) * uniform01();
    return v > hi ? hi : v;
  }

  // Inclusive bounds, rejection sampling for an unbiased draw.
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(lo + static_cast<std::int64_t>(x % span));
  }

 private:
  std::mt19937_64 engine_;
};

enum StreamTag : std::uint64_t {
  kDueDateStream = 1,
  kGeneratorStream = 2,
  kArrivalStream = 3,
  kSetupStream = 4,
};

}  // namespace pfjss
