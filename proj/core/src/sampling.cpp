// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/sampling.hpp"

#include "proxmri/error.hpp"
#include "proxmri/image.hpp"
#include "proxmri/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace proxmri {

std::string to_string(MaskType type)
{
  switch (type) {
  case MaskType::Full: return "full";
  case MaskType::Cartesian1D: return "cartesian1d";
  case MaskType::Random2D: return "random2d";
  case MaskType::Radial: return "radial";
  }
  return "unknown";
}

MaskType parse_mask_type(std::string const &name)
{
  if (name == "full") { return MaskType::Full; }
  if (name == "cartesian1d") { return MaskType::Cartesian1D; }
  if (name == "random2d") { return MaskType::Random2D; }
  if (name == "radial") { return MaskType::Radial; }
  throw ParameterError("unknown mask type '" + name + "' (expected full, cartesian1d, random2d or radial)");
}

SamplingMask::SamplingMask(int height, int width, std::vector<std::uint8_t> data, MaskMeta meta)
  : height_(height)
  , width_(width)
  , data_(std::move(data))
  , meta_(meta)
{
  if (!is_power_of_two(height) || !is_power_of_two(width)) {
    throw DimensionError("mask dimensions must be powers of two");
  }
  if (data_.size() != static_cast<std::size_t>(height) * width) { throw ShapeError("mask data length mismatch"); }
  for (auto v : data_) {
    if (v > 1) { throw FormatError("mask values must be 0 or 1"); }
  }
}

SamplingMask SamplingMask::full(int height, int width)
{
  return SamplingMask(height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, 1));
}

std::size_t SamplingMask::count() const noexcept
{
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

namespace {

void check_fraction(double fraction)
{
  if (!(fraction > 0.0 && fraction <= 1.0)) { throw ParameterError("sampling fraction must be in (0, 1]"); }
}

// Weighted sampling without replacement (Efraimidis-Spirakis): each
// candidate gets key log(u)/w and the `k` largest keys win.
std::vector<std::size_t> weighted_pick(std::vector<std::size_t> const &candidates, std::vector<double> const &weights,
                                       std::size_t k, Rng &rng)
{
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    keyed.emplace_back(std::log(rng.uniform_open_low()) / weights[i], candidates[i]);
  }
  k = std::min(k, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end(),
                    [](auto const &a, auto const &b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) { out.push_back(keyed[i].second); }
  return out;
}

// Tiny floor keeps the extreme edge selectable so every fraction is reachable.
double density(double dist, double dist_max, double exponent)
{
  double const t = std::clamp(1.0 - dist / dist_max, 0.0, 1.0);
  return std::pow(t, exponent) + 1e-6;
}

} // namespace

SamplingMask cartesian1d_mask(int h, int w, double fraction, int acs_lines, std::uint64_t seed, double exponent)
{
  check_fraction(fraction);
  if (acs_lines < 0 || acs_lines % 2 != 0 || acs_lines > h) {
    throw ParameterError("ACS line count must be even and no larger than the image height");
  }
  auto const n_rows = static_cast<int>(std::lround(fraction * h));
  if (fraction * h < acs_lines) { throw ParameterError("sampling fraction too small for the requested ACS lines"); }
  MaskMeta const meta{MaskType::Cartesian1D, fraction, 0, acs_lines, seed};
  if (fraction == 1.0) { return SamplingMask(h, w, std::vector<std::uint8_t>(static_cast<std::size_t>(h) * w, 1), meta); }

  std::vector<std::uint8_t> rows(h, 0);
  int const centre = h / 2;
  for (int r = centre - acs_lines / 2; r < centre + acs_lines / 2; ++r) { rows[r] = 1; }
  rows[centre] = 1; // DC row even when acs_lines == 0

  std::vector<std::size_t> candidates;
  std::vector<double> weights;
  for (int r = 0; r < h; ++r) {
    if (rows[r]) { continue; }
    candidates.push_back(static_cast<std::size_t>(r));
    weights.push_back(density(std::abs(r - centre), h / 2.0, exponent));
  }
  int const have = static_cast<int>(std::count(rows.begin(), rows.end(), std::uint8_t{1}));
  Rng rng(derive_seed(seed, "cartesian1d-mask"));
  for (auto r : weighted_pick(candidates, weights, static_cast<std::size_t>(std::max(0, n_rows - have)), rng)) {
    rows[r] = 1;
  }

  std::vector<std::uint8_t> data(static_cast<std::size_t>(h) * w, 0);
  for (int r = 0; r < h; ++r) {
    std::fill_n(data.begin() + static_cast<std::ptrdiff_t>(r) * w, w, rows[r]);
  }
  return SamplingMask(h, w, std::move(data), meta);
}

SamplingMask random2d_mask(int h, int w, double fraction, int acs_size, std::uint64_t seed, double exponent)
{
  check_fraction(fraction);
  if (acs_size < 0 || acs_size % 2 != 0 || acs_size > std::min(h, w)) {
    throw ParameterError("ACS block size must be even and fit inside the grid");
  }
  auto const total = static_cast<std::size_t>(h) * w;
  if (fraction * static_cast<double>(total) < static_cast<double>(acs_size) * acs_size) {
    throw ParameterError("sampling fraction too small for the requested ACS block");
  }
  MaskMeta const meta{MaskType::Random2D, fraction, 0, acs_size, seed};
  if (fraction == 1.0) { return SamplingMask(h, w, std::vector<std::uint8_t>(total, 1), meta); }

  std::vector<std::uint8_t> data(total, 0);
  int const cr = h / 2;
  int const cc = w / 2;
  for (int r = cr - acs_size / 2; r < cr + acs_size / 2; ++r) {
    for (int c = cc - acs_size / 2; c < cc + acs_size / 2; ++c) { data[static_cast<std::size_t>(r) * w + c] = 1; }
  }
  data[static_cast<std::size_t>(cr) * w + cc] = 1;

  double const dist_max = std::hypot(h / 2.0, w / 2.0);
  std::vector<std::size_t> candidates;
  std::vector<double> weights;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      auto const i = static_cast<std::size_t>(r) * w + c;
      if (data[i]) { continue; }
      candidates.push_back(i);
      weights.push_back(density(std::hypot(r - cr, c - cc), dist_max, exponent));
    }
  }
  auto const target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  auto const have = static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
  Rng rng(derive_seed(seed, "random2d-mask"));
  for (auto i : weighted_pick(candidates, weights, target > have ? target - have : 0, rng)) { data[i] = 1; }
  return SamplingMask(h, w, std::move(data), meta);
}

SamplingMask radial_mask(int h, int w, int n_spokes)
{
  if (n_spokes < 1) { throw ParameterError("radial mask needs at least one spoke"); }
  std::vector<std::uint8_t> data(static_cast<std::size_t>(h) * w, 0);
  int const cr = h / 2;
  int const cc = w / 2;
  // Every spoke has the same length: pixels beyond the inscribed ellipse
  // (semi-axes h/2, w/2) are dropped so diagonal spokes do not reach corners.
  auto set = [&](long r, long c) {
    if (r < 0 || r >= h || c < 0 || c >= w) { return; }
    double const y = static_cast<double>(r - cr) / cr;
    double const x = static_cast<double>(c - cc) / cc;
    if (x * x + y * y > 1.0 + 1e-12) { return; }
    data[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)] = 1;
  };
  for (int i = 0; i < n_spokes; ++i) {
    double const angle = i * std::numbers::pi / n_spokes;
    double const dc = std::cos(angle); // column direction
    double const dr = std::sin(angle); // row direction
    if (std::abs(dc) >= std::abs(dr)) {
      for (int c = 0; c < w; ++c) { set(cr + std::lround((c - cc) * dr / dc), c); }
    } else {
      for (int r = 0; r < h; ++r) { set(r, cc + std::lround((r - cr) * dc / dr)); }
    }
  }
  data[static_cast<std::size_t>(cr) * w + cc] = 1;
  return SamplingMask(h, w, std::move(data), MaskMeta{MaskType::Radial, 0.0, n_spokes, 0, 0});
}

double mask_fraction(SamplingMask const &mask)
{
  return static_cast<double>(mask.count()) / static_cast<double>(mask.data().size());
}

} // namespace proxmri
