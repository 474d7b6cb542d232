#include "kt/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kt::cli::run_cli(argc, argv, std::cout, std::cerr); }
