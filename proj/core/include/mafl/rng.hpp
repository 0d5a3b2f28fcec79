#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace mafl {

// Deterministic PRNG with hand-rolled distributions. std:: distributions are
// implementation-defined, which would break byte-identical outputs across
// standard libraries; this keeps every draw reproducible from the seed alone.
//
// Engine: xoshiro-style splitmix64 sequence. Period is 2^64 per stream;
// streams are derived by mixing the master seed with a purpose tag and an
// index, so per-vehicle streams never depend on iteration order.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable 64-bit hash of a tag string (FNV-1a).
inline std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derive an independent stream seed from (master, purpose, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= hash_tag(tag);
  std::uint64_t b = splitmix64(s);
  s ^= index * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1), 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Lemire-style rejection-free reduction is biased for huge n; the
    // dataset sizes here are < 2^32 so multiply-shift is exact enough.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  // Standard normal via Box-Muller. One value per call; the partner draw is
  // discarded to keep the stream position a simple function of call count.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Circularly-symmetric complex Gaussian, unit total variance:
  // real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal() {
    double re = normal() * 0.7071067811865476;
    double im = normal() * 0.7071067811865476;
    return {re, im};
  }

 private:
  std::uint64_t state_;
};

}  // namespace mafl
