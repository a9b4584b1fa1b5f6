// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "config.hpp"

#include "proxmri/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace proxmri::cli {

namespace {

using C = std::vector<std::string_view>;

C const kAll{"phantom", "mask", "acquire", "train", "recon", "eval", "sweep", "pipeline"};

std::string trim(std::string_view s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) { return {}; }
  auto const e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::vector<KeySpec> const &key_schema()
{
  static std::vector<KeySpec> const schema{
      {"seed", "0", "Master seed; every random stream is derived from it", kAll},
      {"size", "64", "Image side length (power of two)", {"phantom", "mask", "pipeline"}},
      {"coils", "4", "Number of receive coils", {"phantom", "pipeline"}},
      {"n_train", "200", "Number of training phantoms", {"phantom", "pipeline"}},
      {"n_test", "50", "Number of test phantoms", {"phantom", "pipeline"}},
      {"data", "data", "Dataset directory (phantom output)", {"acquire", "train", "recon", "eval", "sweep"}},
      {"out", "", "Output path (file or directory, per command)", kAll},
      {"mask_type", "radial", "Mask type: full, cartesian1d, random2d, radial", {"mask"}},
      {"fraction", "0.3", "Sampled fraction for cartesian1d/random2d masks", {"mask"}},
      {"spokes", "40", "Spoke count for radial masks", {"mask"}},
      {"acs", "12", "Calibration lines (cartesian1d) or block side (random2d)", {"mask", "recon", "eval", "pipeline"}},
      {"density_exponent", "3", "Exponent of the variable-density law", {"mask", "pipeline"}},
      {"mask", "mask.msk", "Mask file, or comma list for eval", {"acquire", "recon", "eval", "sweep"}},
      {"kspace", "kspace", "k-space file or directory, or comma list for eval", {"recon", "eval", "sweep"}},
      {"kspace_sigma", "0", "Complex noise std added to sampled k-space", {"acquire", "pipeline"}},
      {"coil_file", "", "Coil map file (default: <data>/coils.cmp)", {"acquire", "recon", "eval", "sweep"}},
      {"estimate_maps", "false", "Estimate coil maps from the calibration region", {"recon", "eval", "sweep", "pipeline"}},
      {"sigma", "0.03", "Training noise std per channel", {"train", "pipeline"}},
      {"epochs", "200", "Training epochs", {"train", "pipeline"}},
      {"batch", "8", "Training batch size", {"train", "pipeline"}},
      {"lr", "0.001", "Adam learning rate", {"train", "pipeline"}},
      {"patch", "32", "Training crop side (0 = whole image)", {"train", "pipeline"}},
      {"workers", "1", "Training worker threads (results do not depend on it)", {"train", "pipeline"}},
      {"probes", "1", "Jacobian penalty probes per item", {"train", "pipeline"}},
      {"probe_eps", "0.001", "Finite-difference step of the Jacobian penalty", {"train", "pipeline"}},
      {"penalty_weight", "-1", "Jacobian penalty weight (negative: sigma^2)", {"train", "pipeline"}},
      {"filters", "16", "Hidden channels of the denoising block", {"train", "pipeline"}},
      {"depth", "4", "Convolution layers in the denoising block", {"train", "pipeline"}},
      {"unroll", "3", "Unrolled proximal steps", {"train", "pipeline"}},
      {"inner_alpha", "0.5", "Relaxation of the unrolled steps", {"train", "pipeline"}},
      {"weights", "weights.wgt", "Denoiser weight file", {"recon", "eval", "sweep"}},
      {"loss_csv", "", "Per-epoch loss CSV (default: <out>.loss.csv)", {"train"}},
      {"method", "pgd", "Reconstruction: pgd, sense, fista, zerofill", {"recon"}},
      {"lambda", "0.1", "Prior weight of the proximal iteration", {"recon", "eval", "pipeline"}},
      {"step", "1.0", "Gradient step size", {"recon", "eval", "sweep", "pipeline"}},
      {"iters", "100", "Iterations", {"recon", "eval", "sweep", "pipeline"}},
      {"safe_step", "false", "Use step = 1/||A^H A|| from power iteration", {"recon", "eval", "pipeline"}},
      {"l1_lambda", "0.005", "Wavelet l1 weight of the FISTA baseline", {"recon", "eval", "pipeline"}},
      {"wavelet_levels", "4", "Haar levels of the FISTA baseline", {"recon", "eval", "pipeline"}},
      {"methods", "pgd,sense,fista,zerofill", "Methods compared by eval", {"eval", "pipeline"}},
      {"labels", "", "Mask labels for eval (default: mask file stems)", {"eval"}},
      {"recon_dirs", "", "Existing pgd outputs per mask; eval reads them instead of recomputing", {"eval"}},
      {"lambdas", "0,0.05,0.1,0.2,0.5", "Prior weights compared by sweep", {"sweep", "pipeline"}},
      {"cases", "0", "Test cases used by sweep (0 = all)", {"sweep", "pipeline"}},
      {"reference", "", "Reference image for recon traces", {"recon"}},
      {"preview", "false", "Also write PGM previews", {"mask", "recon", "pipeline"}},
      {"presets", "cartesian1d,random2d,radial", "Mask presets run by the pipeline", {"pipeline"}},
      {"cartesian_fraction", "0.3", "Pipeline cartesian1d preset fraction", {"pipeline"}},
      {"random_fraction", "0.2", "Pipeline random2d preset fraction", {"pipeline"}},
      {"radial_spokes", "40", "Pipeline radial preset spokes", {"pipeline"}},
      {"sweep_preset", "radial", "Pipeline preset used for the lambda sweep", {"pipeline"}},
  };
  return schema;
}

std::string flag_to_key(std::string_view flag)
{
  while (!flag.empty() && flag.front() == '-') { flag.remove_prefix(1); }
  std::string key(flag);
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string key_to_flag(std::string_view key)
{
  std::string flag = "--" + std::string(key);
  std::replace(flag.begin() + 2, flag.end(), '_', '-');
  return flag;
}

ExperimentConfig::ExperimentConfig()
{
  for (auto const &k : key_schema()) { values_.emplace(std::string(k.key), std::string(k.default_value)); }
}

void ExperimentConfig::merge_file(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in) { throw IoError("cannot read config file " + path.string()); }
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

void ExperimentConfig::merge_text(std::string_view text, std::string_view origin)
{
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto const hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
    std::string const body = trim(line);
    if (body.empty()) { continue; }
    auto const eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParameterError(std::string(origin) + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    set(key, trim(std::string_view(body).substr(eq + 1)));
  }
}

void ExperimentConfig::set(std::string const &key, std::string value)
{
  auto it = values_.find(key);
  if (it == values_.end()) { throw ParameterError("unknown configuration key '" + key + "'"); }
  it->second = std::move(value);
}

bool ExperimentConfig::has(std::string const &key) const { return values_.count(key) != 0; }

std::string const &ExperimentConfig::str(std::string const &key) const
{
  auto it = values_.find(key);
  if (it == values_.end()) { throw ParameterError("unknown configuration key '" + key + "'"); }
  return it->second;
}

double ExperimentConfig::real(std::string const &key) const
{
  auto const &v = str(key);
  double out = 0.0;
  auto const [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParameterError("'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

int ExperimentConfig::integer(std::string const &key) const
{
  auto const &v = str(key);
  int out = 0;
  auto const [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParameterError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t ExperimentConfig::u64(std::string const &key) const
{
  auto const &v = str(key);
  std::uint64_t out = 0;
  auto const [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParameterError("'" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool ExperimentConfig::boolean(std::string const &key) const
{
  auto const &v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") { return true; }
  if (v == "false" || v == "0" || v == "no" || v == "off") { return false; }
  throw ParameterError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> ExperimentConfig::list(std::string const &key) const
{
  std::vector<std::string> out;
  std::string const &v = str(key);
  std::size_t start = 0;
  while (start <= v.size()) {
    auto const comma = v.find(',', start);
    auto const item = trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) { out.push_back(item); }
    if (comma == std::string::npos) { break; }
    start = comma + 1;
  }
  return out;
}

std::vector<double> ExperimentConfig::real_list(std::string const &key) const
{
  std::vector<double> out;
  for (auto const &item : list(key)) {
    double x = 0.0;
    auto const [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ParameterError("'" + key + "' expects a comma-separated list of numbers");
    }
    out.push_back(x);
  }
  return out;
}

std::string ExperimentConfig::serialize() const
{
  std::string out;
  for (auto const &[k, v] : values_) { out += k + " = " + v + "\n"; }
  return out;
}

void ExperimentConfig::write_sidecar(std::filesystem::path const &path) const
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) { throw IoError("cannot write " + path.string()); }
  out << serialize();
  if (!out) { throw IoError("failed writing " + path.string()); }
}

} // namespace proxmri::cli
