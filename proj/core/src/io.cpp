// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "proxmri/io.hpp"

#include "binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace proxmri {

namespace {

using detail::ByteReader;
using detail::ByteWriter;

// Header dimensions are validated before allocating anything.
int checked_dim(std::uint32_t v, ByteReader const &in, char const *what)
{
  if (v == 0 || v > (1u << 16) || !is_power_of_two(static_cast<int>(v))) {
    throw FormatError(in.name() + ": invalid " + what + " " + std::to_string(v));
  }
  return static_cast<int>(v);
}

void expect_payload(ByteReader const &in, std::size_t bytes)
{
  if (in.remaining() < bytes) { throw FormatError(in.name() + ": truncated file"); }
  if (in.remaining() > bytes) { throw FormatError(in.name() + ": " + std::to_string(in.remaining() - bytes) + " trailing bytes"); }
}

void write_complex(ByteWriter &out, std::span<Cx const> data)
{
  for (auto const &z : data) {
    out.f64(z.real());
    out.f64(z.imag());
  }
}

std::vector<Cx> read_complex(ByteReader &in, std::size_t n)
{
  expect_payload(in, n * 16);
  std::vector<Cx> data(n);
  for (auto &z : data) {
    double const re = in.f64();
    double const im = in.f64();
    z = Cx(re, im);
  }
  return data;
}

void write_multicoil(MultiCoilGrid const &grid, char const *magic, std::filesystem::path const &path)
{
  ByteWriter out;
  out.magic(magic);
  out.u32(static_cast<std::uint32_t>(grid.coils()));
  out.u32(static_cast<std::uint32_t>(grid.height()));
  out.u32(static_cast<std::uint32_t>(grid.width()));
  write_complex(out, grid.data());
  detail::write_file(path, out.bytes());
}

template <typename T>
T read_multicoil(char const *magic, std::filesystem::path const &path)
{
  ByteReader in(detail::read_file(path), path.string());
  in.expect_magic(magic);
  auto const coils = in.u32();
  if (coils == 0 || coils > 1024) { throw FormatError(in.name() + ": invalid coil count " + std::to_string(coils)); }
  int const h = checked_dim(in.u32(), in, "height");
  int const w = checked_dim(in.u32(), in, "width");
  auto data = read_complex(in, static_cast<std::size_t>(coils) * h * w);
  return T(static_cast<int>(coils), h, w, std::move(data));
}

std::vector<char> pgm_bytes(std::vector<double> const &values, int h, int w)
{
  auto const [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double const lo = *lo_it;
  double const range = *hi_it - lo;
  std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<char> bytes(header.begin(), header.end());
  for (double v : values) {
    double const t = range > 0.0 ? (v - lo) / range : 0.0;
    bytes.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0))));
  }
  return bytes;
}

} // namespace

void write_image(ComplexImage const &img, std::filesystem::path const &path)
{
  ByteWriter out;
  out.magic("CIM1");
  out.u32(static_cast<std::uint32_t>(img.height()));
  out.u32(static_cast<std::uint32_t>(img.width()));
  write_complex(out, img.data());
  detail::write_file(path, out.bytes());
}

ComplexImage read_image(std::filesystem::path const &path)
{
  ByteReader in(detail::read_file(path), path.string());
  in.expect_magic("CIM1");
  int const h = checked_dim(in.u32(), in, "height");
  int const w = checked_dim(in.u32(), in, "width");
  return ComplexImage(h, w, read_complex(in, static_cast<std::size_t>(h) * w));
}

void write_coil_maps(CoilMaps const &maps, std::filesystem::path const &path) { write_multicoil(maps, "CMP1", path); }

CoilMaps read_coil_maps(std::filesystem::path const &path) { return read_multicoil<CoilMaps>("CMP1", path); }

void write_kspace(KSpaceData const &y, std::filesystem::path const &path) { write_multicoil(y, "KSP1", path); }

KSpaceData read_kspace(std::filesystem::path const &path) { return read_multicoil<KSpaceData>("KSP1", path); }

void write_mask(SamplingMask const &mask, std::filesystem::path const &path)
{
  ByteWriter out;
  out.magic("MSK1");
  out.u32(static_cast<std::uint32_t>(mask.height()));
  out.u32(static_cast<std::uint32_t>(mask.width()));
  for (auto v : mask.data()) { out.u8(v); }
  detail::write_file(path, out.bytes());
}

SamplingMask read_mask(std::filesystem::path const &path)
{
  ByteReader in(detail::read_file(path), path.string());
  in.expect_magic("MSK1");
  int const h = checked_dim(in.u32(), in, "height");
  int const w = checked_dim(in.u32(), in, "width");
  auto const n = static_cast<std::size_t>(h) * w;
  expect_payload(in, n);
  std::vector<std::uint8_t> data(n);
  for (auto &v : data) {
    v = in.u8();
    if (v > 1) { throw FormatError(in.name() + ": mask values must be 0 or 1"); }
  }
  return SamplingMask(h, w, std::move(data));
}

void write_pgm(ComplexImage const &img, std::filesystem::path const &path)
{
  detail::write_file(path, pgm_bytes(magnitude(img), img.height(), img.width()));
}

void write_pgm(SamplingMask const &mask, std::filesystem::path const &path)
{
  std::vector<double> values(mask.data().begin(), mask.data().end());
  detail::write_file(path, pgm_bytes(values, mask.height(), mask.width()));
}

} // namespace proxmri
