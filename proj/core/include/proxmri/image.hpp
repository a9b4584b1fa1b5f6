// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace proxmri {

using Cx = std::complex<double>;

bool is_power_of_two(int n) noexcept;

/// H x W grid of complex samples, row-major. Both dimensions must be powers
/// of two; this is checked on construction.
class ComplexImage
{
public:
  ComplexImage() = default;
  ComplexImage(int height, int width);
  ComplexImage(int height, int width, std::vector<Cx> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Cx &operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  Cx const &operator()(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  Cx &operator[](std::size_t i) { return data_[i]; }
  Cx const &operator[](std::size_t i) const { return data_[i]; }

  std::span<Cx> data() noexcept { return data_; }
  std::span<Cx const> data() const noexcept { return data_; }

  bool same_shape(ComplexImage const &other) const noexcept
  {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool all_finite() const noexcept;

  friend bool operator==(ComplexImage const &, ComplexImage const &) = default;

private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Cx> data_;
};

/// C x H x W complex array, coil-major. Shared storage for coil maps and
/// multi-coil k-space.
class MultiCoilGrid
{
public:
  MultiCoilGrid() = default;
  MultiCoilGrid(int coils, int height, int width);
  MultiCoilGrid(int coils, int height, int width, std::vector<Cx> data);

  int coils() const noexcept { return coils_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixels() const noexcept { return static_cast<std::size_t>(height_) * width_; }

  std::span<Cx> coil(int c) noexcept { return std::span<Cx>(data_).subspan(c * pixels(), pixels()); }
  std::span<Cx const> coil(int c) const noexcept
  {
    return std::span<Cx const>(data_).subspan(c * pixels(), pixels());
  }
  ComplexImage coil_image(int c) const;
  void set_coil(int c, ComplexImage const &img);

  std::span<Cx> data() noexcept { return data_; }
  std::span<Cx const> data() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(MultiCoilGrid const &, MultiCoilGrid const &) = default;

private:
  int coils_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<Cx> data_;
};

/// Coil sensitivities S, normalized to unit root-sum-of-squares per pixel.
class CoilMaps : public MultiCoilGrid
{
public:
  using MultiCoilGrid::MultiCoilGrid;
  friend bool operator==(CoilMaps const &, CoilMaps const &) = default;
};

/// Multi-coil k-space measurements y. Samples outside the mask are zero.
class KSpaceData : public MultiCoilGrid
{
public:
  using MultiCoilGrid::MultiCoilGrid;
  friend bool operator==(KSpaceData const &, KSpaceData const &) = default;
};

// Elementwise helpers on images of equal shape.
Cx inner(ComplexImage const &a, ComplexImage const &b); // sum conj(a) * b
double norm2(ComplexImage const &a);
double norm2(MultiCoilGrid const &a);
Cx inner(MultiCoilGrid const &a, MultiCoilGrid const &b);
void axpy(Cx alpha, ComplexImage const &x, ComplexImage &y); // y += alpha * x
ComplexImage operator+(ComplexImage const &a, ComplexImage const &b);
ComplexImage operator-(ComplexImage const &a, ComplexImage const &b);
ComplexImage operator*(double s, ComplexImage const &a);
std::vector<double> magnitude(ComplexImage const &img);

void require_same_shape(ComplexImage const &a, ComplexImage const &b, char const *what);

} // namespace proxmri
