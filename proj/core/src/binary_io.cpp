// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "binary_io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>

namespace proxmri::detail {

std::vector<char> read_file(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw IoError("cannot open " + path.string() + " for reading"); }
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(std::filesystem::path const &path, std::vector<char> const &bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { throw IoError("cannot open " + path.string() + " for writing"); }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) { throw IoError("failed writing " + path.string()); }
}

std::string format_double(double v)
{
  char buf[64];
  auto const res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string const &what)
{
  double v = 0.0;
  auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParameterError("invalid number '" + std::string(s) + "' for " + what);
  }
  return v;
}

} // namespace proxmri::detail
