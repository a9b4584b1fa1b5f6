// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"

#include <cstdint>
#include <functional>

namespace proxmri {

using LinearMap = std::function<ComplexImage(ComplexImage const &)>;

/// Largest eigenvalue of a self-adjoint PSD map by power iteration from a
/// seeded random start. Returns 0 if the iterate collapses to zero.
double spectral_norm_estimate(LinearMap const &apply, int height, int width, int iters, std::uint64_t seed);

} // namespace proxmri
