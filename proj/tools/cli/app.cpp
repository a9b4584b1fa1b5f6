// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "app.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "proxmri/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>

namespace proxmri::cli {

namespace {

struct Command
{
  char const *name;
  char const *help;
  void (*fn)(ExperimentConfig const &);
};

constexpr Command kCommands[] = {
    {"phantom", "Generate the phantom dataset and coil maps", cmd_phantom},
    {"mask", "Build a sampling mask", cmd_mask},
    {"acquire", "Simulate multi-coil k-space for the test set", cmd_acquire},
    {"train", "Train the denoiser", cmd_train},
    {"recon", "Reconstruct one k-space file or a directory of them", cmd_recon},
    {"eval", "Evaluate reconstruction methods against references", cmd_eval},
    {"sweep", "Average PSNR/SSIM per iteration for several lambdas", cmd_sweep},
    {"pipeline", "Run every stage end to end", cmd_pipeline},
};

bool is_bool_key(KeySpec const &k) { return k.default_value == "true" || k.default_value == "false"; }

int report(char const *kind, std::exception const &e, int code)
{
  std::cerr << "proxmri: " << kind << ": " << e.what() << '\n';
  return code;
}

} // namespace

int run(std::vector<std::string> args)
{
  CLI::App app{"Learned proximal MRI reconstruction toolkit", "proxmri"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "proxmri 0.1.0");

  // flag values per subcommand, keyed by config key
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_files;
  std::map<std::string, CLI::App *> subs;
  std::map<std::string, std::map<std::string, CLI::Option *>> options;

  for (auto const &c : kCommands) {
    auto *sub = app.add_subcommand(c.name, c.help);
    subs[c.name] = sub;
    sub->add_option("--config", config_files[c.name], "Config file of key = value lines")->check(CLI::ExistingFile);
    for (auto const &k : key_schema()) {
      if (std::find(k.commands.begin(), k.commands.end(), c.name) == k.commands.end()) { continue; }
      std::string const key(k.key);
      std::string const help = std::string(k.help) + " [" + std::string(k.default_value) + "]";
      auto &slot = values[c.name][key];
      CLI::Option *opt = is_bool_key(k) ? sub->add_flag(key_to_flag(key), slot, help)
                                        : sub->add_option(key_to_flag(key), slot, help);
      options[c.name][key] = opt;
    }
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (CLI::ParseError const &e) {
    int const rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (auto const &c : kCommands) {
    if (!subs[c.name]->parsed()) { continue; }
    try {
      ExperimentConfig cfg;
      if (!config_files[c.name].empty()) { cfg.merge_file(config_files[c.name]); }
      for (auto const &[key, opt] : options[c.name]) {
        if (opt->count() > 0) { cfg.set(key, values[c.name][key]); }
      }
      c.fn(cfg);
      return 0;
    } catch (DimensionError const &e) {
      return report("dimension error", e, 2);
    } catch (ParameterError const &e) {
      return report("invalid parameter", e, 2);
    } catch (IoError const &e) {
      return report("I/O error", e, 2);
    } catch (FormatError const &e) {
      return report("format error", e, 3);
    } catch (ShapeError const &e) {
      return report("shape mismatch", e, 3);
    } catch (CalibrationError const &e) {
      return report("calibration failed", e, 4);
    } catch (DivergenceError const &e) {
      return report("reconstruction diverged", e, 4);
    } catch (TrainingError const &e) {
      return report("training failed", e, 4);
    } catch (std::filesystem::filesystem_error const &e) {
      return report("I/O error", e, 2);
    }
  }
  return 2;
}

int run(int argc, char **argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) { args.emplace_back(argv[i]); }
  return run(std::move(args));
}

} // namespace proxmri::cli
