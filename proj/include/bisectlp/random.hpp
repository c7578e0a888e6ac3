#pragma once

#include <cstdint>
#include <initializer_list>

namespace bisectlp {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///   z ^= z >> 27; z *= 0x94D049BB133111EB;
///   z ^= z >> 31;
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream: output k (k = 0, 1, ...) is
/// mix64(seed + (k + 1) * 0x9E3779B97F4A7C15). Any implementation that
/// follows this formula reproduces the stream bit for bit.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return mix64(seed_ + (++counter_) * kGamma); }

  /// Uniform in [0, 1) with 53 bits: (next() >> 11) * 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// True with probability p; p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p) { return uniform01() < p; }

  /// floor(uniform01() * bound), for bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound));
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Order-sensitive seed derivation: h = mix64(h ^ (part + kGamma)) per part,
/// starting from h = 0.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0;
  for (auto part : parts) h = mix64(h ^ (part + SplitMix64::kGamma));
  return h;
}

}  // namespace bisectlp
