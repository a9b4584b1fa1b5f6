// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/image.hpp"

#include "proxmri/error.hpp"

#include <cmath>
#include <string>

namespace proxmri {

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void check_dims(int height, int width)
{
  if (!is_power_of_two(height) || !is_power_of_two(width)) {
    throw DimensionError("image dimensions must be powers of two, got " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

bool finite(std::span<Cx const> v) noexcept
{
  for (auto const &z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) { return false; }
  }
  return true;
}

} // namespace

ComplexImage::ComplexImage(int height, int width)
  : height_(height)
  , width_(width)
{
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(height) * width, Cx{});
}

ComplexImage::ComplexImage(int height, int width, std::vector<Cx> data)
  : height_(height)
  , width_(width)
  , data_(std::move(data))
{
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw ShapeError("image data length does not match " + std::to_string(height) + "x" + std::to_string(width));
  }
}

bool ComplexImage::all_finite() const noexcept { return finite(data_); }

MultiCoilGrid::MultiCoilGrid(int coils, int height, int width)
  : coils_(coils)
  , height_(height)
  , width_(width)
{
  if (coils < 1) { throw ParameterError("coil count must be at least 1"); }
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(coils) * height * width, Cx{});
}

MultiCoilGrid::MultiCoilGrid(int coils, int height, int width, std::vector<Cx> data)
  : coils_(coils)
  , height_(height)
  , width_(width)
  , data_(std::move(data))
{
  if (coils < 1) { throw ParameterError("coil count must be at least 1"); }
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(coils) * height * width) {
    throw ShapeError("multi-coil data length does not match declared shape");
  }
}

ComplexImage MultiCoilGrid::coil_image(int c) const
{
  auto const src = coil(c);
  return ComplexImage(height_, width_, std::vector<Cx>(src.begin(), src.end()));
}

void MultiCoilGrid::set_coil(int c, ComplexImage const &img)
{
  if (img.height() != height_ || img.width() != width_) { throw ShapeError("coil image shape mismatch"); }
  auto dst = coil(c);
  std::copy(img.data().begin(), img.data().end(), dst.begin());
}

bool MultiCoilGrid::all_finite() const noexcept { return finite(data_); }

void require_same_shape(ComplexImage const &a, ComplexImage const &b, char const *what)
{
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
}

Cx inner(ComplexImage const &a, ComplexImage const &b)
{
  require_same_shape(a, b, "inner");
  Cx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) { acc += std::conj(a[i]) * b[i]; }
  return acc;
}

Cx inner(MultiCoilGrid const &a, MultiCoilGrid const &b)
{
  if (a.data().size() != b.data().size()) { throw ShapeError("inner: multi-coil shape mismatch"); }
  Cx acc{};
  for (std::size_t i = 0; i < a.data().size(); ++i) { acc += std::conj(a.data()[i]) * b.data()[i]; }
  return acc;
}

double norm2(ComplexImage const &a)
{
  double s = 0.0;
  for (auto const &z : a.data()) { s += std::norm(z); }
  return std::sqrt(s);
}

double norm2(MultiCoilGrid const &a)
{
  double s = 0.0;
  for (auto const &z : a.data()) { s += std::norm(z); }
  return std::sqrt(s);
}

void axpy(Cx alpha, ComplexImage const &x, ComplexImage &y)
{
  require_same_shape(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) { y[i] += alpha * x[i]; }
}

ComplexImage operator+(ComplexImage const &a, ComplexImage const &b)
{
  require_same_shape(a, b, "add");
  ComplexImage out = a;
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] += b[i]; }
  return out;
}

ComplexImage operator-(ComplexImage const &a, ComplexImage const &b)
{
  require_same_shape(a, b, "subtract");
  ComplexImage out = a;
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] -= b[i]; }
  return out;
}

ComplexImage operator*(double s, ComplexImage const &a)
{
  ComplexImage out = a;
  for (auto &z : out.data()) { z *= s; }
  return out;
}

std::vector<double> magnitude(ComplexImage const &img)
{
  std::vector<double> m(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) { m[i] = std::abs(img[i]); }
  return m;
}

} // namespace proxmri
