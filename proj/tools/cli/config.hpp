// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace proxmri::cli {

/// One configurable setting. `commands` lists the subcommands that accept it
/// as a flag; every key is accepted in a config file.
struct KeySpec
{
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
  std::vector<std::string_view> commands;
};

std::vector<KeySpec> const &key_schema();

/// Flat key=value experiment configuration with typed accessors.
/// Resolution order: schema defaults, then a config file, then flags.
class ExperimentConfig
{
public:
  ExperimentConfig();

  /// Parses `key = value` lines; `#` starts a comment. Unknown keys and
  /// malformed lines throw ParameterError.
  void merge_file(std::filesystem::path const &path);
  void merge_text(std::string_view text, std::string_view origin = "<text>");
  void set(std::string const &key, std::string value);

  bool has(std::string const &key) const;
  std::string const &str(std::string const &key) const;
  std::filesystem::path path(std::string const &key) const { return str(key); }
  double real(std::string const &key) const;
  int integer(std::string const &key) const;
  std::uint64_t u64(std::string const &key) const;
  bool boolean(std::string const &key) const;
  std::vector<std::string> list(std::string const &key) const;
  std::vector<double> real_list(std::string const &key) const;

  /// Sorted `key = value` lines, suitable as a config file.
  std::string serialize() const;
  void write_sidecar(std::filesystem::path const &path) const;

private:
  std::map<std::string, std::string> values_;
};

/// `--foo-bar` <-> `foo_bar`.
std::string flag_to_key(std::string_view flag);
std::string key_to_flag(std::string_view key);

} // namespace proxmri::cli
