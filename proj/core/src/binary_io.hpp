// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

// Little-endian byte-level helpers shared by the file format readers and
// writers. Not installed.

#include "proxmri/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace proxmri::detail {

class ByteWriter
{
public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
  void u32(std::uint32_t v)
  {
    for (int i = 0; i < 4; ++i) { bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu)); }
  }
  void u64(std::uint64_t v)
  {
    for (int i = 0; i < 8; ++i) { bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu)); }
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void u8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

  std::vector<char> const &bytes() const noexcept { return bytes_; }

private:
  std::vector<char> bytes_;
};

class ByteReader
{
public:
  ByteReader(std::vector<char> bytes, std::string name)
    : bytes_(std::move(bytes))
    , name_(std::move(name))
  {
  }

  void expect_magic(std::string_view m)
  {
    need(m.size());
    if (std::string_view(bytes_.data() + pos_, m.size()) != m) {
      throw FormatError(name_ + ": bad magic, expected \"" + std::string(m) + "\"");
    }
    pos_ += m.size();
  }
  std::uint32_t u32()
  {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) { v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i); }
    pos_ += 4;
    return v;
  }
  std::uint64_t u64()
  {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) { v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i); }
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t u8()
  {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::string raw(std::size_t n)
  {
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  void expect_end() const
  {
    if (remaining() != 0) { throw FormatError(name_ + ": " + std::to_string(remaining()) + " trailing bytes"); }
  }
  std::string const &name() const noexcept { return name_; }

private:
  void need(std::size_t n) const
  {
    if (bytes_.size() - pos_ < n) { throw FormatError(name_ + ": truncated file"); }
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
  std::string name_;
};

std::vector<char> read_file(std::filesystem::path const &path);
void write_file(std::filesystem::path const &path, std::vector<char> const &bytes);

std::string format_double(double v);
double parse_double(std::string_view s, std::string const &what);

} // namespace proxmri::detail
