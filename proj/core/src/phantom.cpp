// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/phantom.hpp"

#include "proxmri/error.hpp"
#include "proxmri/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace proxmri {

namespace {

struct Ellipse
{
  double cu, cv; // centre
  double a, b;   // semi-axes
  double angle;
  double intensity;
};

double normalized_coord(int i, int size) { return (2.0 * i + 1.0) / size - 1.0; }

// Separable [1 2 1] / 4 blur with zero boundary.
std::vector<double> blur3(std::vector<double> const &m, int size)
{
  std::vector<double> tmp(m.size()), out(m.size());
  auto at = [&](std::vector<double> const &v, int r, int c) {
    return (r < 0 || r >= size || c < 0 || c >= size) ? 0.0 : v[static_cast<std::size_t>(r) * size + c];
  };
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      tmp[static_cast<std::size_t>(r) * size + c] = 0.25 * at(m, r, c - 1) + 0.5 * at(m, r, c) + 0.25 * at(m, r, c + 1);
    }
  }
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      out[static_cast<std::size_t>(r) * size + c] =
        0.25 * at(tmp, r - 1, c) + 0.5 * at(tmp, r, c) + 0.25 * at(tmp, r + 1, c);
    }
  }
  return out;
}

double max_abs(ComplexImage const &img, std::size_t *where = nullptr)
{
  double best = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    double const a = std::abs(img[i]);
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (where) { *where = idx; }
  return best;
}

} // namespace

ComplexImage generate_phantom(std::uint64_t seed, int size)
{
  if (size < 16) { throw ParameterError("phantom size must be at least 16, got " + std::to_string(size)); }
  if (!is_power_of_two(size)) {
    throw DimensionError("phantom size must be a power of two, got " + std::to_string(size));
  }
  Rng rng(derive_seed(seed, "phantom"));
  constexpr double pi = std::numbers::pi;

  std::vector<Ellipse> shapes;
  shapes.push_back({rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(0.6, 0.85), rng.uniform(0.7, 0.9),
                    rng.uniform(-0.3, 0.3), rng.uniform(0.5, 0.8)});
  int const n_inner = 4 + static_cast<int>(rng.below(8)); // 5..12 ellipses in total
  for (int i = 0; i < n_inner; ++i) {
    double const rad = 0.5 * std::sqrt(rng.uniform());
    double const th = rng.uniform(0.0, 2.0 * pi);
    shapes.push_back({rad * std::cos(th), rad * std::sin(th), rng.uniform(0.05, 0.35), rng.uniform(0.05, 0.35),
                      rng.uniform(0.0, pi), rng.uniform(-0.3, 0.5)});
  }

  std::vector<double> mag(static_cast<std::size_t>(size) * size, 0.0);
  for (int r = 0; r < size; ++r) {
    double const v = normalized_coord(r, size);
    for (int c = 0; c < size; ++c) {
      double const u = normalized_coord(c, size);
      double acc = 0.0;
      for (auto const &e : shapes) {
        double const du = u - e.cu;
        double const dv = v - e.cv;
        double const ca = std::cos(e.angle);
        double const sa = std::sin(e.angle);
        double const pu = (ca * du + sa * dv) / e.a;
        double const pv = (-sa * du + ca * dv) / e.b;
        if (pu * pu + pv * pv <= 1.0) { acc += e.intensity; }
      }
      mag[static_cast<std::size_t>(r) * size + c] = std::max(acc, 0.0);
    }
  }
  mag = blur3(mag, size);

  std::array<double, 6> p{};
  for (auto &coef : p) { coef = rng.uniform(-0.5, 0.5) * (pi / 2.0); }

  ComplexImage img(size, size);
  for (int r = 0; r < size; ++r) {
    double const v = normalized_coord(r, size);
    for (int c = 0; c < size; ++c) {
      double const u = normalized_coord(c, size);
      double const phase = p[0] + p[1] * u + p[2] * v + p[3] * u * u + p[4] * u * v + p[5] * v * v;
      img(r, c) = std::polar(mag[static_cast<std::size_t>(r) * size + c], phase);
    }
  }

  // Reference the global phase to the brightest pixel so it becomes real,
  // then scale; the brightest pixel is then exactly (1, 0). Rounding can
  // leave another pixel an ulp above 1, hence the loop.
  for (int pass = 0; pass < 4; ++pass) {
    std::size_t idx = 0;
    double const peak = max_abs(img, &idx);
    if (peak == 1.0) { break; }
    Cx const rot = std::conj(img[idx]) / std::abs(img[idx]);
    for (auto &z : img.data()) { z *= rot; }
    img[idx] = Cx(std::abs(img[idx]), 0.0);
    double const scale = img[idx].real();
    for (auto &z : img.data()) { z /= scale; }
    img[idx] = Cx(1.0, 0.0);
  }
  return img;
}

CoilMaps generate_coil_maps(std::uint64_t seed, int coils, int size)
{
  if (coils < 1) { throw ParameterError("coil count must be at least 1"); }
  if (!is_power_of_two(size)) {
    throw DimensionError("coil map size must be a power of two, got " + std::to_string(size));
  }
  Rng rng(derive_seed(seed, "coil-maps"));
  constexpr double pi = std::numbers::pi;
  CoilMaps maps(coils, size, size);
  for (int c = 0; c < coils; ++c) {
    double const th = 2.0 * pi * c / coils + rng.uniform(-0.2, 0.2);
    double const cu = 1.2 * std::cos(th);
    double const cv = 1.2 * std::sin(th);
    double const width = rng.uniform(0.7, 0.9);
    double const phase0 = rng.uniform(-pi, pi);
    double const ku = rng.uniform(-0.5, 0.5);
    double const kv = rng.uniform(-0.5, 0.5);
    auto dst = maps.coil(c);
    for (int r = 0; r < size; ++r) {
      double const v = normalized_coord(r, size);
      for (int col = 0; col < size; ++col) {
        double const u = normalized_coord(col, size);
        double const d2 = (u - cu) * (u - cu) + (v - cv) * (v - cv);
        dst[static_cast<std::size_t>(r) * size + col] =
          std::polar(std::exp(-d2 / (2.0 * width * width)), phase0 + ku * u + kv * v);
      }
    }
  }
  std::size_t const n = maps.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    double sos = 0.0;
    for (int c = 0; c < coils; ++c) { sos += std::norm(maps.coil(c)[i]); }
    sos = std::sqrt(sos);
    for (int c = 0; c < coils; ++c) { maps.coil(c)[i] /= sos; }
  }
  return maps;
}

ComplexImage add_gaussian_noise(ComplexImage const &img, double sigma, std::uint64_t seed)
{
  if (!(sigma >= 0.0)) { throw ParameterError("noise sigma must be nonnegative"); }
  if (sigma == 0.0) { return img; }
  Rng rng(derive_seed(seed, "gaussian-noise"));
  ComplexImage out = img;
  for (auto &z : out.data()) {
    double const re = rng.normal();
    double const im = rng.normal();
    z += Cx(sigma * re, sigma * im);
  }
  return out;
}

std::uint64_t dataset_image_seed(std::uint64_t seed, Split split, int index)
{
  return derive_seed(seed, split == Split::Train ? "dataset-train" : "dataset-test", static_cast<std::uint64_t>(index));
}

std::pair<Dataset, Dataset> build_dataset(std::uint64_t seed, int n_train, int n_test, int size)
{
  if (n_train < 1 || n_test < 1) { throw ParameterError("dataset needs at least one train and one test image"); }
  Dataset train{{}, Split::Train, seed};
  Dataset test{{}, Split::Test, seed};
  train.images.reserve(n_train);
  test.images.reserve(n_test);
  for (int i = 0; i < n_train; ++i) { train.images.push_back(generate_phantom(dataset_image_seed(seed, Split::Train, i), size)); }
  for (int i = 0; i < n_test; ++i) { test.images.push_back(generate_phantom(dataset_image_seed(seed, Split::Test, i), size)); }
  return {std::move(train), std::move(test)};
}

} // namespace proxmri
