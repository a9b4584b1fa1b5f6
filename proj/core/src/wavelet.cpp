// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/wavelet.hpp"

#include "proxmri/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace proxmri {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// One analysis step on the leading (h x w) block of `grid`, in place.
void analyze(ComplexImage &grid, int h, int w)
{
  std::vector<Cx> tmp(std::max(h, w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w / 2; ++c) {
      Cx const a = grid(r, 2 * c);
      Cx const b = grid(r, 2 * c + 1);
      tmp[c] = (a + b) * kInvSqrt2;
      tmp[w / 2 + c] = (a - b) * kInvSqrt2;
    }
    for (int c = 0; c < w; ++c) { grid(r, c) = tmp[c]; }
  }
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h / 2; ++r) {
      Cx const a = grid(2 * r, c);
      Cx const b = grid(2 * r + 1, c);
      tmp[r] = (a + b) * kInvSqrt2;
      tmp[h / 2 + r] = (a - b) * kInvSqrt2;
    }
    for (int r = 0; r < h; ++r) { grid(r, c) = tmp[r]; }
  }
}

void synthesize(ComplexImage &grid, int h, int w)
{
  std::vector<Cx> tmp(std::max(h, w));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h / 2; ++r) {
      Cx const lo = grid(r, c);
      Cx const hi = grid(h / 2 + r, c);
      tmp[2 * r] = (lo + hi) * kInvSqrt2;
      tmp[2 * r + 1] = (lo - hi) * kInvSqrt2;
    }
    for (int r = 0; r < h; ++r) { grid(r, c) = tmp[r]; }
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w / 2; ++c) {
      Cx const lo = grid(r, c);
      Cx const hi = grid(r, w / 2 + c);
      tmp[2 * c] = (lo + hi) * kInvSqrt2;
      tmp[2 * c + 1] = (lo - hi) * kInvSqrt2;
    }
    for (int c = 0; c < w; ++c) { grid(r, c) = tmp[c]; }
  }
}

ComplexImage block(ComplexImage const &src, int r0, int c0, int h, int w)
{
  ComplexImage out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) { out(r, c) = src(r0 + r, c0 + c); }
  }
  return out;
}

} // namespace

WaveletCoeffs::WaveletCoeffs(int levels, ComplexImage packed)
  : levels_(levels)
  , packed_(std::move(packed))
{
  if (levels < 0 || levels > max_haar_levels(packed_.height(), packed_.width())) {
    throw DimensionError("wavelet level count " + std::to_string(levels) + " exceeds grid size");
  }
}

ComplexImage WaveletCoeffs::approximation() const
{
  return block(packed_, 0, 0, packed_.height() >> levels_, packed_.width() >> levels_);
}

ComplexImage WaveletCoeffs::detail(int level, Band band) const
{
  if (level < 1 || level > levels_) { throw ParameterError("detail level out of range"); }
  int const h = packed_.height() >> level;
  int const w = packed_.width() >> level;
  switch (band) {
  case Band::Horizontal: return block(packed_, h, 0, h, w);
  case Band::Vertical: return block(packed_, 0, w, h, w);
  case Band::Diagonal: return block(packed_, h, w, h, w);
  }
  return {};
}

int max_haar_levels(int height, int width) noexcept
{
  int const m = std::min(height, width);
  return m > 0 ? std::bit_width(static_cast<unsigned>(m)) - 1 : 0;
}

WaveletCoeffs haar2_forward(ComplexImage const &img, int levels)
{
  if (levels < 0 || levels > max_haar_levels(img.height(), img.width())) {
    throw DimensionError("too many Haar levels (" + std::to_string(levels) + ") for " +
                         std::to_string(img.height()) + "x" + std::to_string(img.width()) + " image");
  }
  ComplexImage grid = img;
  int h = img.height();
  int w = img.width();
  for (int l = 0; l < levels; ++l) {
    analyze(grid, h, w);
    h /= 2;
    w /= 2;
  }
  return WaveletCoeffs(levels, std::move(grid));
}

ComplexImage haar2_inverse(WaveletCoeffs const &coeffs)
{
  ComplexImage grid = coeffs.packed();
  for (int l = coeffs.levels(); l >= 1; --l) {
    synthesize(grid, grid.height() >> (l - 1), grid.width() >> (l - 1));
  }
  return grid;
}

Cx soft_threshold(Cx v, double tau)
{
  double const mag = std::abs(v);
  if (mag <= tau) { return Cx{}; }
  return v * ((mag - tau) / mag);
}

WaveletCoeffs soft_threshold(WaveletCoeffs const &coeffs, double tau)
{
  if (!(tau >= 0.0)) { throw ParameterError("soft threshold requires tau >= 0"); }
  WaveletCoeffs out = coeffs;
  for (auto &z : out.packed().data()) { z = soft_threshold(z, tau); }
  return out;
}

double l1_norm(WaveletCoeffs const &coeffs)
{
  double s = 0.0;
  for (auto const &z : coeffs.packed().data()) { s += std::abs(z); }
  return s;
}

} // namespace proxmri
