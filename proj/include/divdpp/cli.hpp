// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace divdpp::cli {

/// Entry point behind the `divdpp` binary.  `args` excludes the program
/// name.  Returns 0 on success, 1 on a domain error (with a one-line
/// diagnostic on stderr), 2 on a usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace divdpp::cli
