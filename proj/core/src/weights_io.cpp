// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "binary_io.hpp"
#include "proxmri/denoiser.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace proxmri {

namespace {

constexpr std::uint32_t kWeightsVersion = 1;

std::map<std::string, std::string> parse_header(std::string const &text, std::string const &name)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) { continue; }
    auto const eq = line.find('=');
    if (eq == std::string::npos) { throw FormatError(name + ": malformed header line '" + line + "'"); }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string const &field(std::map<std::string, std::string> const &kv, std::string const &key, std::string const &name)
{
  auto it = kv.find(key);
  if (it == kv.end()) { throw FormatError(name + ": header is missing '" + key + "'"); }
  return it->second;
}

template <typename T>
T parse_integer(std::string const &s, std::string const &key, std::string const &name)
{
  T v{};
  auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError(name + ": bad integer for '" + key + "'");
  }
  return v;
}

double parse_real(std::string const &s, std::string const &key, std::string const &name)
{
  try {
    return detail::parse_double(s, key);
  } catch (ParameterError const &) {
    throw FormatError(name + ": bad number for '" + key + "'");
  }
}

} // namespace

void save_weights(DenoiserWeights const &weights, std::filesystem::path const &path)
{
  auto const &cfg = weights.config();
  auto const &meta = weights.meta();
  std::ostringstream header;
  header << "architecture=residual_cnn\n"
         << "filters=" << cfg.filters << "\n"
         << "depth=" << cfg.depth << "\n"
         << "kernel=" << cfg.kernel << "\n"
         << "unroll_steps=" << cfg.unroll_steps << "\n"
         << "inner_alpha=" << detail::format_double(cfg.inner_alpha) << "\n"
         << "sigma=" << detail::format_double(meta.sigma) << "\n"
         << "epochs=" << meta.epochs << "\n"
         << "seed=" << meta.seed << "\n"
         << "param_count=" << weights.params().size() << "\n"
         << "layout=layers input->output; kernel[out][in][ky][kx] then bias[out]\n";
  std::string const text = header.str();

  detail::ByteWriter out;
  out.magic("WGT1");
  out.u32(kWeightsVersion);
  out.u32(static_cast<std::uint32_t>(text.size()));
  out.raw(text);
  for (double v : weights.params()) { out.f64(v); }
  detail::write_file(path, out.bytes());
}

DenoiserWeights load_weights(std::filesystem::path const &path)
{
  detail::ByteReader in(detail::read_file(path), path.string());
  in.expect_magic("WGT1");
  auto const version = in.u32();
  if (version != kWeightsVersion) {
    throw FormatError(in.name() + ": unsupported weights version " + std::to_string(version));
  }
  auto const header_len = in.u32();
  auto const kv = parse_header(in.raw(header_len), in.name());

  NetConfig cfg;
  cfg.filters = parse_integer<int>(field(kv, "filters", in.name()), "filters", in.name());
  cfg.depth = parse_integer<int>(field(kv, "depth", in.name()), "depth", in.name());
  cfg.kernel = parse_integer<int>(field(kv, "kernel", in.name()), "kernel", in.name());
  cfg.unroll_steps = parse_integer<int>(field(kv, "unroll_steps", in.name()), "unroll_steps", in.name());
  cfg.inner_alpha = parse_real(field(kv, "inner_alpha", in.name()), "inner_alpha", in.name());
  try {
    cfg.validate();
  } catch (ParameterError const &e) {
    throw FormatError(in.name() + ": invalid architecture: " + e.what());
  }
  TrainingMeta meta;
  meta.sigma = parse_real(field(kv, "sigma", in.name()), "sigma", in.name());
  meta.epochs = parse_integer<int>(field(kv, "epochs", in.name()), "epochs", in.name());
  meta.seed = parse_integer<std::uint64_t>(field(kv, "seed", in.name()), "seed", in.name());

  auto const declared = parse_integer<std::size_t>(field(kv, "param_count", in.name()), "param_count", in.name());
  if (declared != parameter_count(cfg)) {
    throw FormatError(in.name() + ": param_count " + std::to_string(declared) + " does not match architecture (" +
                      std::to_string(parameter_count(cfg)) + ")");
  }
  if (in.remaining() != declared * 8) {
    throw FormatError(in.name() + ": payload is " + std::to_string(in.remaining()) + " bytes, header declares " +
                      std::to_string(declared * 8));
  }
  std::vector<double> params(declared);
  for (auto &v : params) { v = in.f64(); }
  return DenoiserWeights(cfg, std::move(params), meta);
}

} // namespace proxmri
