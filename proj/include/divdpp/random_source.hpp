// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace divdpp {

/// Seeded deterministic random stream.  A fixed seed reproduces the exact
/// same draw sequence on every platform we target (mt19937_64 semantics are
/// pinned by the C++ standard).  Consumers receive a RandomSource by
/// mutable reference; forking produces an independent stream so that
/// subsystems do not perturb each other's draw sequences.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  /// Standard normal draw.
  double normal() {
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  /// Derive an independent stream.  Deterministic in (seed, stream): the
  /// same pair always yields the same child source, regardless of how many
  /// draws were consumed from the parent.
  RandomSource fork(std::uint64_t stream) const {
    return RandomSource(mix_(seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix_(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace divdpp
