#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace gat {

// splitmix64 constants (Steele, Lea & Flood 2014). Chosen over std::mt19937
// because the output sequence is fixed by the algorithm itself, not by a
// library implementation, so seeded results are portable across platforms.
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit generator; one instance per sampling trace.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return splitmix64_finalize(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Uniform integer in [0, n). Multiply-shift map; the bias is < n/2^64 and
  // irrelevant at the pool sizes used here, while staying branch-free and
  // portable.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller. Two uniforms per call, nothing cached,
  // so the draw count per sample stays fixed and replayable.
  double next_normal() {
    double u1 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643 * u2);
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used to fold identifier strings into seed material.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Folds seed parts into one stream seed. Sequential absorption through the
// splitmix64 finalizer: order-sensitive, avalanches each part, and gives
// unrelated streams for unrelated (master, run, function) triples.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64_finalize(splitmix64_finalize(a + kGolden) ^ (b + kGolden));
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

}  // namespace gat
