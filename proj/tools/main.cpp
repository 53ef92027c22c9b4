// SPDX-License-Identifier: Apache-2.0

#include <solvechart/cli/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return solvechart::cli::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
