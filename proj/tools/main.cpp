// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <vector>

#include "divdpp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return divdpp::cli::run_cli(args);
}
