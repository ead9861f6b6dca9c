// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "bdspec/cli.hpp"

int main(int argc, char** argv) {
    return bdspec::cli::run_cli(argc, argv, std::cout, std::cerr);
}
