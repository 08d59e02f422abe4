// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "patchroute/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return patchroute::cli::run_cli(args, std::cout, std::cerr);
}
