#pragma once

#include <cstdint>
#include <limits>

namespace calab {

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2)));
}

inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream keyed by (seed, stream id). Draw k is a pure function of
// (seed, stream, k), so streams never depend on scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream)
      : key_(hash_combine(mix64(seed), stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  double uniform() { return to_unit((*this)()); }
  // Uniform on [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = max() - max() % n;
    std::uint64_t v;
    do v = (*this)(); while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Random field over coordinates: the value at (coordinate, lane) does not
// depend on which other cells were drawn, so enlarging a sampled window keeps
// the cells it already had.
class CellStream {
 public:
  CellStream(std::uint64_t seed, std::uint64_t sample)
      : key_(hash_combine(hash_combine(mix64(seed), sample), 0x5ca1ab1eULL)) {}

  std::uint64_t at(long coordinate, unsigned lane) const {
    return mix64(hash_combine(key_ + lane, static_cast<std::uint64_t>(coordinate)));
  }
  double uniform(long coordinate, unsigned lane) const { return to_unit(at(coordinate, lane)); }

 private:
  std::uint64_t key_;
};

}  // namespace calab
