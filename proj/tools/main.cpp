// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return midpoint::cli::run(argc, argv, std::cout, std::cerr);
}
