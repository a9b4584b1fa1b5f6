// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"

namespace proxmri {

// Centered, orthonormal 2-D DFT. The DC sample sits at (H/2, W/2) on both
// input and output grids (fftshift convention), and both directions are
// scaled by 1/sqrt(H*W) so the pair is unitary. Sampling masks are defined
// in this same centered frame.

ComplexImage fft2_centered(ComplexImage const &img);
ComplexImage ifft2_centered(ComplexImage const &img);

} // namespace proxmri
