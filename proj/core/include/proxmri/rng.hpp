// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace proxmri {

/// xoshiro256** generator seeded through splitmix64. Every sampling routine
/// in the library draws from this so outputs are reproducible bit-for-bit
/// across platforms and standard libraries.
class Rng
{
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform in (0, 1].
  double uniform_open_low() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal (Marsaglia polar method, spare value cached).
  double normal() noexcept;

private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t &state) noexcept;

/// Seed for an independent substream identified by (purpose, index).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) noexcept;

} // namespace proxmri
