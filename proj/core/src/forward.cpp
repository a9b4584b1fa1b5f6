// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/forward.hpp"

#include "proxmri/error.hpp"
#include "proxmri/fft.hpp"
#include "proxmri/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace proxmri {

ForwardModel::ForwardModel(SamplingMask mask, CoilMaps maps)
  : mask_(std::move(mask))
  , maps_(std::move(maps))
{
  if (mask_.height() != maps_.height() || mask_.width() != maps_.width()) {
    throw ShapeError("mask and coil maps disagree on grid size");
  }
}

namespace {

void check_image(ForwardModel const &model, ComplexImage const &x)
{
  if (x.height() != model.height() || x.width() != model.width()) {
    throw ShapeError("image is " + std::to_string(x.height()) + "x" + std::to_string(x.width()) +
                     " but the forward model is " + std::to_string(model.height()) + "x" +
                     std::to_string(model.width()));
  }
}

void check_kspace(ForwardModel const &model, KSpaceData const &y)
{
  if (y.coils() != model.coils() || y.height() != model.height() || y.width() != model.width()) {
    throw ShapeError("k-space shape does not match the forward model");
  }
}

} // namespace

KSpaceData apply_A(ForwardModel const &model, ComplexImage const &x)
{
  check_image(model, x);
  KSpaceData y(model.coils(), model.height(), model.width());
  auto const &mask = model.mask();
  ComplexImage weighted(x.height(), x.width());
  for (int c = 0; c < model.coils(); ++c) {
    auto const s = model.maps().coil(c);
    for (std::size_t i = 0; i < x.size(); ++i) { weighted[i] = s[i] * x[i]; }
    auto const k = fft2_centered(weighted);
    auto dst = y.coil(c);
    for (std::size_t i = 0; i < k.size(); ++i) { dst[i] = mask.sampled(i) ? k[i] : Cx{}; }
  }
  return y;
}

ComplexImage apply_AH(ForwardModel const &model, KSpaceData const &y)
{
  check_kspace(model, y);
  ComplexImage x(model.height(), model.width());
  ComplexImage masked(model.height(), model.width());
  auto const &mask = model.mask();
  for (int c = 0; c < model.coils(); ++c) {
    auto const src = y.coil(c);
    for (std::size_t i = 0; i < masked.size(); ++i) { masked[i] = mask.sampled(i) ? src[i] : Cx{}; }
    auto const img = ifft2_centered(masked);
    auto const s = model.maps().coil(c);
    for (std::size_t i = 0; i < x.size(); ++i) { x[i] += std::conj(s[i]) * img[i]; }
  }
  return x;
}

ComplexImage apply_AHA(ForwardModel const &model, ComplexImage const &x) { return apply_AH(model, apply_A(model, x)); }

ComplexImage dc_gradient(ForwardModel const &model, ComplexImage const &x, KSpaceData const &y)
{
  check_kspace(model, y);
  KSpaceData r = apply_A(model, x);
  for (std::size_t i = 0; i < r.data().size(); ++i) { r.data()[i] -= y.data()[i]; }
  return apply_AH(model, r);
}

KSpaceData simulate_acquisition(ComplexImage const &image, CoilMaps const &maps, SamplingMask const &mask,
                                double kspace_sigma, std::uint64_t seed)
{
  if (!(kspace_sigma >= 0.0)) { throw ParameterError("k-space noise sigma must be nonnegative"); }
  ForwardModel const model(mask, maps);
  KSpaceData y = apply_A(model, image);
  if (kspace_sigma == 0.0) { return y; }
  Rng rng(derive_seed(seed, "kspace-noise"));
  for (int c = 0; c < y.coils(); ++c) {
    auto dst = y.coil(c);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (!mask.sampled(i)) { continue; }
      double const re = rng.normal();
      double const im = rng.normal();
      dst[i] += Cx(kspace_sigma * re, kspace_sigma * im);
    }
  }
  return y;
}

namespace {

// Tukey window over n samples with half of the extent tapered.
double tukey(int j, int n)
{
  constexpr double alpha = 0.5;
  double const x = (j + 0.5) / n; // in (0, 1)
  double const edge = alpha / 2.0;
  if (x < edge) { return 0.5 * (1.0 - std::cos(std::numbers::pi * x / edge)); }
  if (x > 1.0 - edge) { return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - x) / edge)); }
  return 1.0;
}

} // namespace

CoilMaps estimate_coil_maps(KSpaceData const &calib, int acs_size)
{
  int const h = calib.height();
  int const w = calib.width();
  int const nc = calib.coils();
  if (acs_size < 2 || acs_size > std::min(h, w)) { throw ParameterError("ACS size must be in [2, min(H, W)]"); }
  int const r0 = h / 2 - acs_size / 2;
  int const c0 = w / 2 - acs_size / 2;

  // A location counts as sampled if any coil recorded a nonzero value there.
  for (int r = r0; r < r0 + acs_size; ++r) {
    for (int c = c0; c < c0 + acs_size; ++c) {
      auto const i = static_cast<std::size_t>(r) * w + c;
      bool any = false;
      for (int k = 0; k < nc && !any; ++k) { any = calib.coil(k)[i] != Cx{}; }
      if (!any) {
        throw CalibrationError("ACS region is not fully sampled at k-space location (" + std::to_string(r) + ", " +
                               std::to_string(c) + ")");
      }
    }
  }

  CoilMaps maps(nc, h, w);
  for (int k = 0; k < nc; ++k) {
    ComplexImage low(h, w);
    auto const src = calib.coil(k);
    for (int r = r0; r < r0 + acs_size; ++r) {
      for (int c = c0; c < c0 + acs_size; ++c) {
        low(r, c) = src[static_cast<std::size_t>(r) * w + c] * tukey(r - r0, acs_size) * tukey(c - c0, acs_size);
      }
    }
    maps.set_coil(k, ifft2_centered(low));
  }

  double const fallback = 1.0 / std::sqrt(static_cast<double>(nc));
  for (std::size_t i = 0; i < maps.pixels(); ++i) {
    double sos = 0.0;
    for (int k = 0; k < nc; ++k) { sos += std::norm(maps.coil(k)[i]); }
    sos = std::sqrt(sos);
    if (sos < 1e-8) {
      for (int k = 0; k < nc; ++k) { maps.coil(k)[i] = Cx(fallback, 0.0); }
      continue;
    }
    Cx const ref = maps.coil(0)[i];
    Cx const rot = std::abs(ref) > 0.0 ? std::conj(ref) / std::abs(ref) : Cx(1.0, 0.0);
    for (int k = 0; k < nc; ++k) { maps.coil(k)[i] *= rot / sos; }
  }
  return maps;
}

} // namespace proxmri
