// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include "config.hpp"

#include <functional>
#include <string>

namespace proxmri::cli {

void cmd_phantom(ExperimentConfig const &cfg);
void cmd_mask(ExperimentConfig const &cfg);
void cmd_acquire(ExperimentConfig const &cfg);
void cmd_train(ExperimentConfig const &cfg);
void cmd_recon(ExperimentConfig const &cfg);
void cmd_eval(ExperimentConfig const &cfg);
void cmd_sweep(ExperimentConfig const &cfg);
void cmd_pipeline(ExperimentConfig const &cfg);

/// Receives one-line progress notes; defaults to stderr.
using LogSink = std::function<void(std::string const &)>;
void set_log_sink(LogSink sink);

/// `test_0007.cim` style names used throughout the data layout.
std::string case_name(std::string const &prefix, int index, std::string const &ext);

} // namespace proxmri::cli
