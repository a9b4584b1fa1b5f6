// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"
#include "proxmri/sampling.hpp"

#include <cstdint>

namespace proxmri {

/// Encoding operator A = P F S. Immutable once built; safe to share between
/// concurrent reconstructions.
class ForwardModel
{
public:
  ForwardModel(SamplingMask mask, CoilMaps maps);

  SamplingMask const &mask() const noexcept { return mask_; }
  CoilMaps const &maps() const noexcept { return maps_; }
  int height() const noexcept { return mask_.height(); }
  int width() const noexcept { return mask_.width(); }
  int coils() const noexcept { return maps_.coils(); }

private:
  SamplingMask mask_;
  CoilMaps maps_;
};

/// y_c = P * F(S_c * x) for every coil.
KSpaceData apply_A(ForwardModel const &model, ComplexImage const &x);
/// x = sum_c conj(S_c) * F^-1(P * y_c).
ComplexImage apply_AH(ForwardModel const &model, KSpaceData const &y);
/// A^H A x without materializing the intermediate k-space.
ComplexImage apply_AHA(ForwardModel const &model, ComplexImage const &x);
/// Gradient of 0.5 * ||A x - y||^2, i.e. A^H (A x - y).
ComplexImage dc_gradient(ForwardModel const &model, ComplexImage const &x, KSpaceData const &y);

/// apply_A followed by optional complex Gaussian noise (std `kspace_sigma`
/// per real component) on sampled locations only.
KSpaceData simulate_acquisition(ComplexImage const &image, CoilMaps const &maps, SamplingMask const &mask,
                                double kspace_sigma, std::uint64_t seed);

/// Low-resolution coil sensitivity estimate from the fully sampled central
/// acs_size x acs_size block: taper, inverse FFT, root-sum-of-squares
/// normalize, phase referenced to the first coil.
CoilMaps estimate_coil_maps(KSpaceData const &calib, int acs_size);

} // namespace proxmri
