// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace proxmri {

/// Random ellipse phantom with a smooth low-order polynomial phase. The
/// magnitude is normalized so that max |x| == 1.0 exactly.
ComplexImage generate_phantom(std::uint64_t seed, int size);

/// Smooth synthetic receive profiles: Gaussian bumps centred around the
/// border with a linear phase ramp each, normalized to unit
/// root-sum-of-squares at every pixel.
CoilMaps generate_coil_maps(std::uint64_t seed, int coils, int size);

/// Independent N(0, sigma^2) perturbations on the real and imaginary parts.
ComplexImage add_gaussian_noise(ComplexImage const &img, double sigma, std::uint64_t seed);

enum class Split
{
  Train,
  Test
};

struct Dataset
{
  std::vector<ComplexImage> images;
  Split split = Split::Train;
  std::uint64_t seed = 0;

  friend bool operator==(Dataset const &, Dataset const &) = default;
};

/// Train and test sets drawn from disjoint seed substreams.
std::pair<Dataset, Dataset> build_dataset(std::uint64_t seed, int n_train, int n_test, int size);

/// Seed used for image `index` of a split, exposed so single files can be
/// regenerated without building the whole set.
std::uint64_t dataset_image_seed(std::uint64_t seed, Split split, int index);

} // namespace proxmri
