#pragma once

#include <cstdint>
#include <random>

namespace expdist {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent child seed from (seed, index); used so replicates
// and partitions are independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64(s);
}

// Deterministic uniform double stream. The u64 -> double mapping is fixed
// here (not delegated to std::uniform_real_distribution, whose output is
// implementation-defined) so seeds reproduce across compilers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(bootstrap(seed)) {}

  static RandomStream child(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(derive_seed(seed, index));
  }

  // Uniform on the open interval (0, 1); safe for inverse-CDF transforms.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static std::mt19937_64 bootstrap(std::uint64_t seed) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    return std::mt19937_64(splitmix64(s));
  }

  std::mt19937_64 engine_;
};

}  // namespace expdist
