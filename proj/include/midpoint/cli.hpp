// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/exact.hpp"

#include <iosfwd>
#include <string_view>

namespace midpoint::cli
{

enum ExitCode : int { success = 0, check_failed = 1, usage_error = 2 };

/// Parses "2^-n" and returns n.  Throws ParseError otherwise.
unsigned parse_tolerance(std::string_view text);

/// Entry point of the command-line tool; writes reports to `out` and
/// diagnostics to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace midpoint::cli
