// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#include <iostream>

#include "ecl/cli.hpp"

int main(int argc, char** argv) { return ecl::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
