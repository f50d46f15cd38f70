// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include <iostream>

#include "onebit/cli.hpp"

int main(int argc, char** argv) { return onebit::cli::main(argc, argv, std::cout, std::cerr); }
