// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#pragma once

#include <string>
#include <vector>

namespace proxmri::cli {

/// Parses arguments, runs one subcommand and returns the process exit code.
/// 0 success, 2 usage/parameter/IO, 3 format/shape, 4 numerical failure.
int run(std::vector<std::string> args);
int run(int argc, char **argv);

} // namespace proxmri::cli
