#pragma once

// Deterministic randomness: substream derivation and the samplers used across
// the library. Every random quantity in a run is drawn from a stream derived
// from one master seed, so identical (seed, config) pairs reproduce runs
// bit for bit. Samplers map raw engine bits to doubles explicitly instead of
// going through std::*_distribution, whose output is not pinned down by the
// standard; this keeps streams identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace ldpic {

// SplitMix64 finalizer. Bijective, well mixed, and cheap; the standard choice
// for expanding one 64-bit seed into independent stream seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Purposes partition the substream space of one master seed.
//   graph_edges    generator pair sampling (a = auxiliary stream id)
//   init_vector    the Gaussian start vector shared by protocol and PIC
//   user_noise     protocol Laplace draws (a = user, b = round; round 0 is
//                  the degree report)
//   padding        protocol edge padding (a = user)
//   baseline_flips randomized response (a = row)
//   eigensolver    reference eigensolver start vectors
enum class Purpose : std::uint64_t {
  graph_edges = 1,
  init_vector = 2,
  user_noise = 3,
  padding = 4,
  baseline_flips = 5,
  eigensolver = 6,
};

// Master seed with documented substream derivation: the stream seed is the
// SplitMix64 chain over (value, purpose, a, b). Distinct tuples give
// independent streams on every platform.
struct Seed {
  std::uint64_t value = 0;

  [[nodiscard]] std::uint64_t stream(Purpose purpose, std::uint64_t a = 0,
                                     std::uint64_t b = 0) const {
    std::uint64_t h = splitmix64(value);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
  }
};

// Stream of doubles over mt19937_64. The engine is fully specified by the
// standard, so the bit stream is portable; only the distributions are not,
// and those are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_seed) : engine_(stream_seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0, 1): 53-bit mantissa plus a half-ulp
  // offset, so neither endpoint can be returned and log(u) is always finite.
  double uniform01() {
    return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Rejection over a power-of-two mask keeps
  // the draw exact.
  int uniform_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_int: bound must be positive");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    std::uint64_t mask = b - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = bits() & mask;
      if (v < b) return static_cast<int>(v);
    }
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair and caches
  // the second value. No rejection, so the draw count per call is fixed.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // Laplace with the given scale via inverse CDF.
  double laplace(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace: scale must be positive");
    const double u = uniform01() - 0.5;
    const double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Single Laplace draw from an explicit stream. Mean 0, variance 2*scale^2.
inline double laplace_sample(double scale, Rng& rng) { return rng.laplace(scale); }

}  // namespace ldpic
