// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/rng.hpp"

#include <bit>
#include <cmath>

namespace proxmri {

std::uint64_t splitmix64(std::uint64_t &state) noexcept
{
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed)
{
  std::uint64_t state = seed;
  for (auto &word : s_) { word = splitmix64(state); }
}

std::uint64_t Rng::next() noexcept
{
  std::uint64_t const result = std::rotl(s_[1] * 5, 7) * 9;
  std::uint64_t const t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open_low() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) noexcept
{
  // Lemire-style rejection keeps the result unbiased.
  std::uint64_t const threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t const r = next();
    if (r >= threshold) { return r % n; }
  }
}

double Rng::normal() noexcept
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double const f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t index) noexcept
{
  // FNV-1a over the purpose tag, then mixed with the parent seed and index.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : purpose) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  std::uint64_t state = seed ^ h;
  std::uint64_t const a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL);
  splitmix64(state);
  return splitmix64(state);
}

} // namespace proxmri
