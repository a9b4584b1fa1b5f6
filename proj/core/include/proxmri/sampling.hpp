// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace proxmri {

enum class MaskType
{
  Full,
  Cartesian1D,
  Random2D,
  Radial
};

std::string to_string(MaskType type);
MaskType parse_mask_type(std::string const &name);

struct MaskMeta
{
  MaskType type = MaskType::Full;
  double fraction = 1.0; // requested fraction (Cartesian/random)
  int spokes = 0;        // radial only
  int acs = 0;
  std::uint64_t seed = 0;
};

/// Binary k-space sampling pattern in the centered frame (DC at (H/2, W/2)).
class SamplingMask
{
public:
  SamplingMask() = default;
  SamplingMask(int height, int width, std::vector<std::uint8_t> data, MaskMeta meta = {});

  static SamplingMask full(int height, int width);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::uint8_t operator()(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  bool sampled(std::size_t i) const { return data_[i] != 0; }
  std::vector<std::uint8_t> const &data() const noexcept { return data_; }
  MaskMeta const &meta() const noexcept { return meta_; }

  std::size_t count() const noexcept;

  /// Pixelwise equality of the pattern; metadata is not compared.
  friend bool operator==(SamplingMask const &a, SamplingMask const &b)
  {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
  }

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
  MaskMeta meta_;
};

/// Default exponent of the variable-density law p(k) ~ (1 - |k|/k_max)^e.
inline constexpr double kDensityExponent = 3.0;

/// Whole phase-encode rows drawn without replacement by the variable-density
/// law, with the central `acs_lines` rows always sampled. Exactly
/// round(fraction * h) rows end up sampled.
SamplingMask cartesian1d_mask(int h, int w, double fraction, int acs_lines, std::uint64_t seed,
                              double exponent = kDensityExponent);

/// Pointwise variable-density selection (radial distance from DC) with a
/// forced central acs_size x acs_size block. Exactly round(fraction * h * w)
/// samples.
SamplingMask random2d_mask(int h, int w, double fraction, int acs_size, std::uint64_t seed,
                           double exponent = kDensityExponent);

/// Pseudo-radial pattern: spoke i at angle i*pi/n_spokes rasterized through
/// the grid centre. Angle 0 is the centre row.
SamplingMask radial_mask(int h, int w, int n_spokes);

double mask_fraction(SamplingMask const &mask);

} // namespace proxmri
