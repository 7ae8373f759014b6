// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hired::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kIoError = 2,
};

/// Runs the `hired` command line. `args` excludes the program name.
/// Errors are reported on `err` as a single "error: <flag-or-file>: <reason>" line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hired::cli
