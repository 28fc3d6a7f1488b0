#pragma once

#include <cstdint>
#include <string>

namespace rvsim {

/// SplitMix64 (Steele/Lea/Flood 2014). All randomness in the project flows
/// through this generator: its output is fully specified by the algorithm, so
/// runs are bit-identical across platforms and standard library versions.
/// std::uniform_int_distribution is deliberately avoided (implementation
/// defined sequences).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n) via rejection sampling (unbiased, stable).
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a over bytes; used for corpus/UXS content hashes embedded in
/// manifests, trace headers and report headers.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

/// Mixes tuple components into a derived seed for per-task generators in
/// parallel sweeps (order independent results).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0,
                                 std::uint64_t d = 0) {
  SplitMix64 g(base ^ (a * 0x9E3779B97F4A7C15ull) ^ (b * 0xC2B2AE3D27D4EB4Full) ^
               (c * 0x165667B19E3779F9ull) ^ (d * 0x27D4EB2F165667C5ull));
  return g.next();
}

}  // namespace rvsim
