// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_RNG_HPP
#define LSCONV_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lsconv {

// splitmix64 finalizer (Steele/Lea/Flood constants). Bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based pseudo-random stream. Streams are derived, never split at
// run time: the stream for a unit of work is a pure function of the root
// seed and the key words (domain, replica, generation, individual), so any
// scheduling of replicas across threads reproduces the same draws.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_unit_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe where both endpoints blow up.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential(double rate) {
    return -std::log(next_unit_positive()) / rate;
  }

  // Box-Muller, cosine branch only. Two uniforms per normal keeps the
  // consumption pattern fixed, which matters for reproducibility.
  double next_normal() {
    double u1 = next_unit_positive();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Derives the stream keyed on (seed, domain, replica, generation, individual).
// Each word is absorbed through the mixer, so permuted keys give unrelated
// streams.
inline RngStream substream(std::uint64_t seed, std::uint64_t domain,
                           std::uint64_t replica, std::uint64_t generation,
                           std::uint64_t individual) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(domain));
  h = mix64(h ^ mix64(replica));
  h = mix64(h ^ mix64(generation));
  h = mix64(h ^ mix64(individual));
  return RngStream(h);
}

// Key domains keep draws for unrelated purposes out of each other's streams.
inline constexpr std::uint64_t kDomainSimulation = 1;
inline constexpr std::uint64_t kDomainLimit = 2;
inline constexpr std::uint64_t kDomainMean = 3;

}  // namespace lsconv

#endif  // LSCONV_RNG_HPP
