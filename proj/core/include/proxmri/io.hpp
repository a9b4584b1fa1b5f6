// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "proxmri/image.hpp"
#include "proxmri/sampling.hpp"

#include <filesystem>

namespace proxmri {

// Binary file formats, all little-endian:
//   CIM1  "CIM1", u32 H, u32 W, H*W x (f64 re, f64 im), row-major
//   CMP1  "CMP1", u32 C, u32 H, u32 W, C*H*W complex f64, coil-major
//   KSP1  "KSP1", u32 C, u32 H, u32 W, C*H*W complex f64, coil-major
//   MSK1  "MSK1", u32 H, u32 W, H*W bytes in {0, 1}
// Denoiser weights (WGT1) live with the denoiser. Readers reject bad magic,
// truncation and trailing bytes with FormatError.

void write_image(ComplexImage const &img, std::filesystem::path const &path);
ComplexImage read_image(std::filesystem::path const &path);

void write_coil_maps(CoilMaps const &maps, std::filesystem::path const &path);
CoilMaps read_coil_maps(std::filesystem::path const &path);

void write_kspace(KSpaceData const &y, std::filesystem::path const &path);
KSpaceData read_kspace(std::filesystem::path const &path);

void write_mask(SamplingMask const &mask, std::filesystem::path const &path);
SamplingMask read_mask(std::filesystem::path const &path);

/// 8-bit binary PGM (P5) of the magnitude, min-max normalized to 0..255.
void write_pgm(ComplexImage const &img, std::filesystem::path const &path);
void write_pgm(SamplingMask const &mask, std::filesystem::path const &path);

} // namespace proxmri
