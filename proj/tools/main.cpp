// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The proxmri Authors

#include "cli/app.hpp"

int main(int argc, char **argv) { return proxmri::cli::run(argc, argv); }
