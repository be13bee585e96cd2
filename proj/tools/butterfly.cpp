#include <iostream>

#include "butterfly/cli/commands.hpp"

int main(int argc, char** argv) { return butterfly::cli::run_cli(argc, argv, std::cout, std::cerr); }
