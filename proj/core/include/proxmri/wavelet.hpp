// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"

namespace proxmri {

/// Orientation of a detail band. On a 2x2 block [[a,b],[c,d]] the one-level
/// responses are Horizontal (a+b-c-d)/2, Vertical (a-b+c-d)/2 and
/// Diagonal (a-b-c+d)/2.
enum class Band
{
  Horizontal,
  Vertical,
  Diagonal
};

/// Multilevel orthonormal Haar coefficients in the usual Mallat packing: the
/// coarsest approximation occupies the top-left (H/2^L x W/2^L) block and
/// each level's three detail bands surround it.
class WaveletCoeffs
{
public:
  WaveletCoeffs() = default;
  WaveletCoeffs(int levels, ComplexImage packed);

  int levels() const noexcept { return levels_; }
  ComplexImage const &packed() const noexcept { return packed_; }
  ComplexImage &packed() noexcept { return packed_; }

  ComplexImage approximation() const;
  /// Detail band at `level` (1 = finest).
  ComplexImage detail(int level, Band band) const;

  friend bool operator==(WaveletCoeffs const &, WaveletCoeffs const &) = default;

private:
  int levels_ = 0;
  ComplexImage packed_;
};

int max_haar_levels(int height, int width) noexcept;

WaveletCoeffs haar2_forward(ComplexImage const &img, int levels);
ComplexImage haar2_inverse(WaveletCoeffs const &coeffs);

/// Complex soft threshold v -> v * max(|v| - tau, 0) / |v| on every
/// coefficient, approximation band included.
WaveletCoeffs soft_threshold(WaveletCoeffs const &coeffs, double tau);
Cx soft_threshold(Cx v, double tau);

/// Sum of coefficient magnitudes.
double l1_norm(WaveletCoeffs const &coeffs);

} // namespace proxmri
