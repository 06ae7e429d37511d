#include <iostream>

#include "hybridgn/cli.hpp"

int main(int argc, char** argv) { return hybridgn::cli::run_cli(argc, argv, std::cout, std::cerr); }
